// solvers.hpp — Trajectories under closed, phenomenological, microscopic, pseudomode and global-bath dynamics
//
// Every solver returns density matrices of the system modes on the shared record
// grid of the integrator configuration, together with trace, Hermiticity and
// positivity diagnostics. Steady-state detection evaluates the Schrodinger-picture
// generator on the recorded state; with early exit enabled the integration stops
// once the residual drops below the threshold and the remaining record points
// repeat the converged state.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bosedeph/generators.hpp"
#include "bosedeph/integrator.hpp"
#include "bosedeph/model.hpp"

namespace bosedeph {

struct DensityMatrix {
    BasisPtr basis;
    Matrix rho;

    DensityMatrix(BasisPtr b, Matrix m);
    static DensityMatrix pure(BasisPtr b, const Vector& psi);

    double trace_error() const;        // |Tr rho - 1|
    double hermiticity_error() const;  // max |rho - rho†|
    double min_eigenvalue() const;
    /// Throws std::invalid_argument unless trace, Hermiticity and positivity hold.
    void validate(double trace_tol = 1e-8, double herm_tol = 1e-10, double eig_tol = 1e-7) const;
};

enum class Dynamics { Closed, Phenomenological, Microscopic, Pseudomode, Global };

std::string dynamics_name(Dynamics d);
Dynamics parse_dynamics(const std::string& s);

enum class Frame { Interaction, Schrodinger };

/// Dephasing rates of the phenomenological model, one per mode (L↑, L↓, R↑, R↓).
struct PhenomenologicalRates {
    double L_up{0.0}, L_down{0.0}, R_up{0.0}, R_down{0.0};
    static PhenomenologicalRates uniform(double r) { return {r, r, r, r}; }
};

/// Markov limit of the short-time generator mapped onto number dephasing:
/// 2 g0 lambda / (lambda^2 + omega_0^2). On the same-spin two-particle block the
/// map D[n_X↑] + D[n_X↓] <-> D[sigma_z,X] is exact up to this factor.
double default_phenomenological_rate(const ModelParams& p);

struct DynamicsSpec {
    Dynamics kind{Dynamics::Closed};
    ModelParams params;
    std::optional<PhenomenologicalRates> rates;  // phenomenological; default_phenomenological_rate when unset
    int n_max{4};                                // pseudomode occupation cap
    double pm_damping_factor{2.0};               // pseudomode damping rate = factor * lambda
    double global_gamma{0.1};                    // global-bath rate
    Frame frame{Frame::Schrodinger};             // microscopic output frame
    int n_baths{2};
};

struct SteadyStateOptions {
    bool enabled{false};
    double threshold{1e-7};
    bool early_exit{false};
};

struct SteadyStateReport {
    bool converged{false};
    double t_reached{0.0};
    double residual{0.0};
    DensityMatrix rho_ss;
};

struct TrajectoryDiagnostics {
    double max_trace_drift{0.0};
    double max_hermiticity_error{0.0};
    double min_eigenvalue{1.0};
    double t_min_eigenvalue{0.0};
    /// Largest population found in the top pseudomode level (truncation check).
    double max_top_level_population{0.0};
};

struct Trajectory {
    Dynamics kind{Dynamics::Closed};
    BasisPtr basis;
    std::vector<double> times;
    std::vector<Matrix> states;     // system density matrices, full record grid
    std::vector<double> residuals;  // steady-state residual per integrated record (when enabled)
    std::size_t integrated_points{0};
    TrajectoryDiagnostics diag;
    IntegrationStats stats;
    std::optional<SteadyStateReport> steady;

    DensityMatrix final_state() const { return DensityMatrix(basis, states.back()); }
};

/// |psi(t)> = e^{-iHt} psi0 on the given times.
std::vector<Vector> evolve_closed(const Operator& H, const Vector& psi0, const std::vector<double>& times);

/// Integrate an arbitrary generator on the record grid of `cfg`.
Trajectory evolve_generator(const Generator& L, const DensityMatrix& rho0, const IntegratorConfig& cfg);

Trajectory evolve(const DynamicsSpec& spec, const DensityMatrix& rho0, const IntegratorConfig& cfg,
                  const SteadyStateOptions& ss = {});

Trajectory evolve_phenomenological(const DensityMatrix& rho0, const ModelParams& p, const PhenomenologicalRates& r,
                                   const IntegratorConfig& cfg);
Trajectory evolve_microscopic(const DensityMatrix& rho0, const ModelParams& p, const IntegratorConfig& cfg,
                              Frame frame = Frame::Schrodinger);
Trajectory evolve_pseudomode(const DensityMatrix& rho0, const ModelParams& p, int n_max,
                             const IntegratorConfig& cfg);
Trajectory evolve_global_bath(const DensityMatrix& rho0, const ModelParams& p, double gamma,
                              const IntegratorConfig& cfg);

SteadyStateReport find_steady_state(const DynamicsSpec& spec, const DensityMatrix& rho0, double threshold,
                                    double t_max, IntegratorConfig cfg);

/// Pseudomode embedding restricted to the (N↑, N↓) symmetry blocks occupied by
/// the initial state. H_pm and the damping both conserve the spin-resolved
/// particle numbers, so the restriction is exact.
class PseudomodeEmbedding {
public:
    /// The pseudomodes are damped by damping_factor * lambda * D[c_X]. With the
    /// default factor 2 the free-mode correlation decays as e^{-(i omega_0 + lambda) t}.
    PseudomodeEmbedding(const BasisPtr& system, const Matrix& rho0_sys, const ModelParams& p, int n_max,
                        double damping_factor = 2.0);

    const BasisPtr& extended_basis() const { return ext_; }
    const LindbladGenerator& generator() const { return *gen_; }
    const Matrix& hamiltonian() const { return H_; }

    Matrix embed(const Matrix& rho_sys) const;  // rho ⊗ |0,0><0,0|
    Matrix partial_trace(const Matrix& rho_ext) const;
    double top_level_population(const Matrix& rho_ext) const;

private:
    BasisPtr sys_;
    BasisPtr ext_;
    int n_max_;
    std::vector<std::size_t> sys_index_;  // extended index -> system index
    std::vector<int> pm_index_;           // extended index -> pseudomode pair label
    std::vector<bool> top_;               // extended index has a pseudomode at the cap
    Matrix H_;
    std::unique_ptr<LindbladGenerator> gen_;
};

/// e^{-i(H_S+H_D)t} on the system basis, cached by eigendecomposition.
class FreePropagator {
public:
    explicit FreePropagator(const Matrix& H);
    Matrix at(double t) const;
    Matrix to_schrodinger(const Matrix& rho_interaction, double t) const;
    Matrix to_interaction(const Matrix& rho_schrodinger, double t) const;

private:
    Matrix V_;
    Eigen::VectorXd e_;
};

}  // namespace bosedeph
