// bath.hpp — Lorentzian bath correlation and the time-dependent master-equation coefficients
//
// The bath correlation is g0 e^{-(i omega_0 + lambda)|t-s|}. The coefficients are the
// time integrals
//   alpha(t) = int_0^t ds          e^{-(i omega_0 + lambda)(t-s)}
//   beta(t)  = int_0^t ds cos(J s) e^{-(i omega_0 + lambda)(t-s)}
//   kappa(t) = int_0^t ds sin(J s) e^{-(i omega_0 + lambda)(t-s)}
// evaluated in closed form. They carry no factor g0; the damping matrix and the
// canonical Hamiltonian apply g0 and the number of baths.

#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "bosedeph/model.hpp"

namespace bosedeph {

cplx bath_correlation(double t, double s, const ModelParams& p);

cplx alpha(double t, const ModelParams& p);
cplx beta(double t, const ModelParams& p);
cplx kappa(double t, const ModelParams& p);

/// Short-time dephasing rate function int_0^t <E(t)E(s)> ds / g0.
cplx gamma_short_time(double t, const ModelParams& p);

struct CoefficientSet {
    double t{0.0};
    cplx alpha;
    cplx beta;
    cplx kappa;
};
CoefficientSet coefficients(double t, const ModelParams& p);

/// Weight of the Lorentzian below omega = 0, i.e. the part of the closed-form
/// correlation that a bath restricted to positive frequencies would not have.
double negative_frequency_weight(const ModelParams& p);

/// Scalars multiplying the operators of the canonical Hamiltonian
///   H_can = h_D H_D + h_BB B^2 + h_CC C^2 + h_BC {B, C}.
struct HcanCoefficients {
    double h_D{0.0};
    double h_BB{0.0};
    double h_CC{0.0};
    double h_BC{0.0};
};

/// Canonical coefficient matrix over the jump operators (F_1, F_2) = (B, C),
/// including the factors g0 and n_baths.
struct DampingMatrix {
    double t{0.0};
    Eigen::Matrix2cd D;
    HcanCoefficients H_can_coeffs;
};

DampingMatrix damping_matrix(double t, const ModelParams& p, int n_baths = 2);

/// Pre-canonical coefficient matrix, rows = operator at the earlier time s:
///   Gamma = [[beta cos Jt, beta sin Jt], [kappa cos Jt, kappa sin Jt]]   (no g0).
Eigen::Matrix2cd gamma_matrix(double t, const ModelParams& p);

Operator canonical_hamiltonian(double t, const ModelParams& p, const OperatorSet& ops, int n_baths = 2);

/// Eigenvalues of D(t) in ascending order. A negative value signals a
/// temporarily negative canonical rate.
std::array<double, 2> nonmarkov_spectrum(double t, const ModelParams& p, int n_baths = 2);

}  // namespace bosedeph
