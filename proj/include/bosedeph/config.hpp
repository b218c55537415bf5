// config.hpp — Scenario descriptions: INI parsing, validation and built-in presets
//
// A scenario file is INI with a few top-level keys and one section per concern:
//
//   name          = fig3_onres
//   initial_state = L_up,R_up
//   dynamics      = phenomenological,microscopic,pseudomode
//   observables   = P11,C1,negativity
//
//   [params]         omega_s J phi g0 lambda omega_0
//   [integrator]     method dt t_end tolerance record_stride
//   [pseudomode]     n_max damping_factor
//   [phenomenological] rate | rate_L_up rate_L_down rate_R_up rate_R_down
//   [microscopic]    frame
//   [global]         gamma method
//   [steady_state]   enabled threshold early_exit
//   [output]         coherence_pairs c1_spin

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bosedeph/integrator.hpp"
#include "bosedeph/model.hpp"
#include "bosedeph/observables.hpp"
#include "bosedeph/solvers.hpp"

namespace bosedeph {

/// Every violated constraint or parse failure of a scenario, one message each.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

enum class Observable {
    P11,
    C1,
    Negativity,
    Concurrence,
    FidelityPsiPlus,
    FidelityPsiMinus,
    SloccSuccess,
    Coherences,
    Trace,
    MinEigenvalue,
};

std::string observable_name(Observable o);
Observable parse_observable(const std::string& s);
const std::vector<Observable>& all_observables();

/// A pair of two-particle Fock kets whose density-matrix element is exported.
struct CoherencePair {
    std::vector<ModeId> ket;
    std::vector<ModeId> bra;
    std::string label() const;  // e.g. rho_LuRd_LdRu
};

struct ScenarioConfig {
    std::string name;
    std::vector<ModeId> initial_state;  // modes receiving one creation operator each
    std::vector<Dynamics> dynamics;
    std::vector<Observable> observables;
    ModelParams params;
    IntegratorConfig integrator;
    int n_max{4};
    double pm_damping_factor{2.0};
    std::optional<PhenomenologicalRates> phen_rates;
    Frame frame{Frame::Schrodinger};
    double global_gamma{0.1};
    Method global_method{Method::Exponential};
    SteadyStateOptions steady;
    std::vector<CoherencePair> coherence_pairs;
    Spin c1_spin{Spin::Up};

    std::vector<std::string> violations() const;
    void validate() const;  // throws ConfigError

    DynamicsSpec dynamics_spec(Dynamics d) const;
    IntegratorConfig integrator_for(Dynamics d) const;
};

/// Integrator step used when none is given: min(0.01/J, 0.01/lambda).
double default_dt(const ModelParams& p);

std::string initial_state_label(const std::vector<ModeId>& modes);
std::vector<ModeId> parse_ket(const std::string& s);

struct ParseOptions {
    bool strict{true};                   // unknown keys are errors rather than warnings
    std::vector<std::string>* warnings{nullptr};
};

ScenarioConfig parse_config(const std::string& text, const ParseOptions& opt = {});
ScenarioConfig load_config(const std::string& path, const ParseOptions& opt = {});

/// INI text reproducing the configuration (round-trips through parse_config).
std::string to_ini(const ScenarioConfig& cfg);

const std::vector<std::string>& preset_names();
ScenarioConfig preset(const std::string& name);

/// Parameters addressable by sweeps: omega_s J phi g0 lambda omega_0 n_max
/// damping_factor gamma dt t_end.
const std::vector<std::string>& sweep_axes();
void apply_axis(ScenarioConfig& cfg, const std::string& axis, double value);

}  // namespace bosedeph
