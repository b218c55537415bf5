// bath.cpp — Closed forms for the Lorentzian bath coefficients

#include "bosedeph/bath.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace bosedeph {

namespace {

constexpr cplx I{0.0, 1.0};

cplx decay_rate(const ModelParams& p) { return cplx(p.lambda, p.omega_0); }

void require_damped(const ModelParams& p) {
    if (!(p.lambda > 0)) throw std::invalid_argument("lambda must be > 0");
}

void require_time(double t) {
    if (!(t >= 0)) throw std::invalid_argument("time must be >= 0");
}

// int_0^t e^{i w s} e^{-z(t-s)} ds = (e^{i w t} - e^{-z t}) / (z + i w)
cplx resonance(double t, double w, const ModelParams& p) {
    const cplx z = decay_rate(p);
    return (std::exp(I * (w * t)) - std::exp(-z * t)) / (z + I * w);
}

}  // namespace

cplx bath_correlation(double t, double s, const ModelParams& p) {
    return p.g0 * std::exp(-decay_rate(p) * std::abs(t - s));
}

cplx alpha(double t, const ModelParams& p) {
    require_damped(p);
    require_time(t);
    const cplx z = decay_rate(p);
    return (1.0 - std::exp(-z * t)) / z;
}

cplx beta(double t, const ModelParams& p) {
    require_damped(p);
    require_time(t);
    return 0.5 * (resonance(t, p.J, p) + resonance(t, -p.J, p));
}

cplx kappa(double t, const ModelParams& p) {
    require_damped(p);
    require_time(t);
    return (resonance(t, p.J, p) - resonance(t, -p.J, p)) / (2.0 * I);
}

cplx gamma_short_time(double t, const ModelParams& p) { return alpha(t, p); }

CoefficientSet coefficients(double t, const ModelParams& p) {
    return CoefficientSet{t, alpha(t, p), beta(t, p), kappa(t, p)};
}

double negative_frequency_weight(const ModelParams& p) {
    require_damped(p);
    return 0.5 - std::atan(p.omega_0 / p.lambda) / std::numbers::pi;
}

Eigen::Matrix2cd gamma_matrix(double t, const ModelParams& p) {
    const cplx b = beta(t, p), k = kappa(t, p);
    const double c = std::cos(p.J * t), s = std::sin(p.J * t);
    Eigen::Matrix2cd g;
    g << b * c, b * s, k * c, k * s;
    return g;
}

DampingMatrix damping_matrix(double t, const ModelParams& p, int n_baths) {
    if (n_baths != 1 && n_baths != 2) throw std::invalid_argument("n_baths must be 1 or 2");
    const cplx b = beta(t, p), k = kappa(t, p);
    const double c = std::cos(p.J * t), s = std::sin(p.J * t);
    const double f = p.g0 * n_baths;

    DampingMatrix dm;
    dm.t = t;
    const cplx d12(b.real() * s + k.real() * c, b.imag() * s - k.imag() * c);
    dm.D << 2.0 * b.real() * c, d12, std::conj(d12), 2.0 * k.real() * s;
    dm.D *= f;

    dm.H_can_coeffs.h_D = f * (b.real() * s - k.real() * c) / (2.0 * p.J);
    dm.H_can_coeffs.h_BB = f * b.imag() * c;
    dm.H_can_coeffs.h_CC = f * k.imag() * s;
    dm.H_can_coeffs.h_BC = f * 0.5 * (b.imag() * s + k.imag() * c);
    return dm;
}

Operator canonical_hamiltonian(double t, const ModelParams& p, const OperatorSet& ops, int n_baths) {
    const auto h = damping_matrix(t, p, n_baths).H_can_coeffs;
    return ops.H_D * cplx(h.h_D) + ops.B * ops.B * cplx(h.h_BB) + ops.C * ops.C * cplx(h.h_CC) +
           anticommutator(ops.B, ops.C) * cplx(h.h_BC);
}

std::array<double, 2> nonmarkov_spectrum(double t, const ModelParams& p, int n_baths) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(damping_matrix(t, p, n_baths).D, Eigen::EigenvaluesOnly);
    return {es.eigenvalues()(0), es.eigenvalues()(1)};
}

}  // namespace bosedeph
