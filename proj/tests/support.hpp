// support.hpp — Helpers shared by the unit tests

#pragma once

#include <random>

#include "bosedeph/observables.hpp"

namespace testing {

using namespace bosedeph;

inline Matrix random_matrix(std::mt19937& rng, Eigen::Index n) {
    std::normal_distribution<double> nd;
    Matrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx(nd(rng), nd(rng));
    return m;
}

/// Full-rank random density matrix X X† / Tr.
inline Matrix random_density(std::mt19937& rng, Eigen::Index n) {
    const Matrix x = random_matrix(rng, n);
    Matrix r = x * x.adjoint();
    return r / r.trace();
}

inline Matrix random_hermitian(std::mt19937& rng, Eigen::Index n) {
    const Matrix x = random_matrix(rng, n);
    return (x + x.adjoint()) / 2.0;
}

inline Matrix pure(const Vector& psi) { return psi * psi.adjoint(); }

inline ModelParams offres_params() {
    ModelParams p;
    p.g0 = 0.15;
    p.lambda = 1.0;
    p.omega_0 = 0.0;
    return p;
}

inline ModelParams onres_params() {
    ModelParams p;
    p.g0 = 0.1;
    p.lambda = 0.5;
    p.omega_0 = 1.0;
    return p;
}

inline DensityMatrix ket_state(const BasisPtr& b, std::initializer_list<ModeId> modes) {
    return DensityMatrix::pure(b, fock_ket(*b, modes));
}

}  // namespace testing
