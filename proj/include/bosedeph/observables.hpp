// observables.hpp — Coincidence, post-selected two-qubit state, entanglement and distance measures
//
// Two-qubit convention: |L sigma, R tau> maps to |sigma> ⊗ |tau>, ordered
// {|↑↑>, |↑↓>, |↓↑>, |↓↓>} with the spin found in L first.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bosedeph/solvers.hpp"

namespace bosedeph {

class PostSelectionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Spin { Up, Down };

struct TwoQubitState {
    Eigen::Matrix4cd rho4;
};

struct SloccResult {
    TwoQubitState state;
    double success_prob{0.0};
};

/// Tr(rho Pi_LR).
double coincidence_probability(const DensityMatrix& rho);

/// Pi rho Pi / Tr(Pi rho) on the one-per-site subspace; throws PostSelectionError
/// when the success probability is below eps.
SloccResult slocc_project(const DensityMatrix& rho, double eps = 1e-10);

/// Wootters concurrence.
double concurrence(const TwoQubitState& s);

struct NegativityValue {
    double value{0.0};  // max(0, raw)
    double raw{0.0};
};

/// Negativity for the L-modes | R-modes bipartition. The sector is embedded in
/// the product of local occupation spaces (n_↑ + n_↓ <= particles per site).
NegativityValue negativity_detailed(const DensityMatrix& rho);
double negativity(const DensityMatrix& rho);

/// <L_s R_s† + h.c.>
double first_order_correlation(const DensityMatrix& rho, Spin s = Spin::Up);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const Matrix& rho, const Matrix& sigma);
/// (1/2) || rho - sigma ||_1
double trace_distance(const Matrix& rho, const Matrix& sigma);

std::vector<cplx> coherences(const DensityMatrix& rho, const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

/// (|↑↓> ± |↓↑>)/sqrt(2) in the two-qubit basis.
Eigen::Vector4cd bell_psi_plus();
Eigen::Vector4cd bell_psi_minus();
double fidelity_with_pure(const TwoQubitState& s, const Eigen::Vector4cd& psi);

struct ObservableRecord {
    double t{0.0};
    double P11{0.0};
    double C1{0.0};
    double negativity{0.0};
    double negativity_raw{0.0};
    // Post-selected quantities; NaN when post-selection is impossible.
    double concurrence{0.0};
    double fidelity_psi_plus{0.0};
    double fidelity_psi_minus{0.0};
    double slocc_success_prob{0.0};
    std::vector<cplx> coherences;
};

ObservableRecord evaluate_observables(const DensityMatrix& rho, double t,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& coherence_pairs = {},
                                      Spin c1_spin = Spin::Up);

}  // namespace bosedeph
