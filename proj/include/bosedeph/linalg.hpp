// linalg.hpp — Dense Hermitian helpers shared by solvers and observables

#pragma once

#include <Eigen/Dense>

#include "bosedeph/fock.hpp"

namespace bosedeph::linalg {

/// e^{-i H t} for Hermitian H via eigendecomposition.
Matrix unitary_propagator(const Matrix& H, double t);

/// Eigenvalues below dim * eps * max|eigenvalue| are indistinguishable from zero
/// and set to it, as are negative ones; square roots would otherwise amplify them.
Eigen::VectorXd clip_roundoff(const Eigen::VectorXd& eigenvalues);

/// Principal square root of a Hermitian positive semidefinite matrix; eigenvalues
/// at round-off level are clipped to zero.
Matrix psd_sqrt(const Matrix& rho);

Eigen::VectorXd hermitian_eigenvalues(const Matrix& m);
double min_eigenvalue(const Matrix& rho);

/// Sum of absolute eigenvalues of a Hermitian matrix.
double hermitian_trace_norm(const Matrix& m);

/// Dagger-symmetrized copy, (m + m†)/2.
Matrix hermitian_part(const Matrix& m);

}  // namespace bosedeph::linalg
