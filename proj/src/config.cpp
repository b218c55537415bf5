// config.cpp

#include "bosedeph/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace bosedeph {

namespace pt = boost::property_tree;

namespace {

std::string join(const std::vector<std::string>& v, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

std::vector<std::string> split_list(const std::string& s, const char* seps) {
    std::vector<std::string> parts;
    boost::split(parts, s, boost::is_any_of(seps));
    std::vector<std::string> out;
    for (auto& p : parts) {
        boost::trim(p);
        if (!p.empty()) out.push_back(p);
    }
    return out;
}

std::string short_mode(ModeId m) {
    switch (m) {
        case ModeId::LUp: return "Lu";
        case ModeId::LDown: return "Ld";
        case ModeId::RUp: return "Ru";
        case ModeId::RDown: return "Rd";
        case ModeId::PmL: return "Pl";
        case ModeId::PmR: return "Pr";
    }
    return "?";
}

// Shortest representation that parses back to the same double.
std::string fmt(double x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

// Allowed keys per section; "" is the top level.
const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"", {"name", "initial_state", "dynamics", "observables"}},
        {"params", {"omega_s", "J", "phi", "g0", "lambda", "omega_0"}},
        {"integrator", {"method", "dt", "t_end", "tolerance", "record_stride"}},
        {"pseudomode", {"n_max", "damping_factor"}},
        {"phenomenological", {"rate", "rate_L_up", "rate_L_down", "rate_R_up", "rate_R_down"}},
        {"microscopic", {"frame"}},
        {"global", {"gamma", "method"}},
        {"steady_state", {"enabled", "threshold", "early_exit"}},
        {"output", {"coherence_pairs", "c1_spin"}},
    };
    return s;
}

// Typed reads that record failures instead of throwing.
class Reader {
public:
    Reader(const pt::ptree& root, std::vector<std::string>& errors) : root_(root), errors_(errors) {}

    std::optional<std::string> str(const std::string& path) const {
        auto v = root_.get_optional<std::string>(pt::ptree::path_type(path, '/'));
        if (!v) return std::nullopt;
        return boost::trim_copy(*v);
    }

    template <class T>
    void num(const std::string& path, T& out) const {
        const auto s = str(path);
        if (!s) return;
        try {
            std::size_t pos = 0;
            double v = std::stod(*s, &pos);
            if (pos != s->size()) throw std::invalid_argument("trailing characters");
            if constexpr (std::is_integral_v<T>) {
                if (v != std::floor(v)) throw std::invalid_argument("not an integer");
                out = static_cast<T>(v);
            } else {
                out = v;
            }
        } catch (const std::exception&) {
            errors_.push_back(path + ": cannot parse '" + *s + "' as a number");
        }
    }

    void boolean(const std::string& path, bool& out) const {
        const auto s = str(path);
        if (!s) return;
        const auto v = boost::to_lower_copy(*s);
        if (v == "true" || v == "yes" || v == "1" || v == "on") out = true;
        else if (v == "false" || v == "no" || v == "0" || v == "off") out = false;
        else errors_.push_back(path + ": expected a boolean, got '" + *s + "'");
    }

private:
    const pt::ptree& root_;
    std::vector<std::string>& errors_;
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::invalid_argument("invalid scenario:\n  - " + join(problems, "\n  - ")), problems_(std::move(problems)) {}

// ---- names ------------------------------------------------------------------

const std::vector<Observable>& all_observables() {
    static const std::vector<Observable> v = {Observable::P11,
                                              Observable::C1,
                                              Observable::Negativity,
                                              Observable::Concurrence,
                                              Observable::FidelityPsiPlus,
                                              Observable::FidelityPsiMinus,
                                              Observable::SloccSuccess,
                                              Observable::Coherences,
                                              Observable::Trace,
                                              Observable::MinEigenvalue};
    return v;
}

std::string observable_name(Observable o) {
    switch (o) {
        case Observable::P11: return "P11";
        case Observable::C1: return "C1";
        case Observable::Negativity: return "negativity";
        case Observable::Concurrence: return "concurrence";
        case Observable::FidelityPsiPlus: return "fidelity_psi_plus";
        case Observable::FidelityPsiMinus: return "fidelity_psi_minus";
        case Observable::SloccSuccess: return "slocc_success";
        case Observable::Coherences: return "coherences";
        case Observable::Trace: return "trace";
        case Observable::MinEigenvalue: return "min_eigenvalue";
    }
    return "?";
}

Observable parse_observable(const std::string& s) {
    for (auto o : all_observables()) {
        if (observable_name(o) == s) return o;
    }
    std::vector<std::string> names;
    for (auto o : all_observables()) names.push_back(observable_name(o));
    throw std::invalid_argument("unknown observable '" + s + "' (known: " + join(names, ", ") + ")");
}

std::string CoherencePair::label() const {
    std::string s = "rho_";
    for (auto m : ket) s += short_mode(m);
    s += "_";
    for (auto m : bra) s += short_mode(m);
    return s;
}

std::vector<ModeId> parse_ket(const std::string& s) {
    std::vector<ModeId> modes;
    for (const auto& p : split_list(s, ",")) {
        const ModeId m = parse_mode(p);
        if (!is_system_mode(m)) throw std::invalid_argument("ket '" + s + "' names a pseudomode");
        modes.push_back(m);
    }
    if (modes.size() != 2) throw std::invalid_argument("ket '" + s + "' must create exactly two particles");
    std::sort(modes.begin(), modes.end());
    return modes;
}

std::string initial_state_label(const std::vector<ModeId>& modes) {
    std::vector<std::string> v;
    for (auto m : modes) v.emplace_back(mode_name(m));
    return join(v, ",");
}

double default_dt(const ModelParams& p) { return std::min(0.01 / p.J, 0.01 / p.lambda); }

// ---- validation ---------------------------------------------------------------

std::vector<std::string> ScenarioConfig::violations() const {
    std::vector<std::string> v;
    if (name.empty()) v.push_back("name must not be empty");
    if (initial_state.size() != 2) v.push_back("initial_state must create exactly two particles");
    if (dynamics.empty()) v.push_back("dynamics must list at least one of closed, phenomenological, microscopic, pseudomode, global");
    std::set<Dynamics> seen(dynamics.begin(), dynamics.end());
    if (seen.size() != dynamics.size()) v.push_back("dynamics lists an entry twice");
    if (observables.empty()) v.push_back("observables must not be empty");
    for (const auto& s : params.violations()) v.push_back("params: " + s);
    for (const auto& s : integrator.violations()) v.push_back(s);
    if (n_max < 2) v.push_back("pseudomode.n_max must be >= 2");
    if (!(pm_damping_factor > 0)) v.push_back("pseudomode.damping_factor must be > 0");
    if (phen_rates) {
        for (double r : {phen_rates->L_up, phen_rates->L_down, phen_rates->R_up, phen_rates->R_down}) {
            if (!(r >= 0)) {
                v.push_back("phenomenological rates must be >= 0");
                break;
            }
        }
    }
    if (!(global_gamma >= 0)) v.push_back("global.gamma must be >= 0");
    if (!(steady.threshold > 0)) v.push_back("steady_state.threshold must be > 0");
    if (integrator.method == Method::Exponential) {
        for (auto d : dynamics) {
            if (d == Dynamics::Microscopic)
                v.push_back("integrator.method = expm cannot propagate the time-dependent microscopic generator");
            if (d == Dynamics::Pseudomode)
                v.push_back("integrator.method = expm is limited to the system space; use rk4 or rk45 for pseudomode");
        }
    }
    if (std::count(observables.begin(), observables.end(), Observable::Coherences) && coherence_pairs.empty())
        v.push_back("observable 'coherences' needs output.coherence_pairs");
    return v;
}

void ScenarioConfig::validate() const {
    auto v = violations();
    if (!v.empty()) throw ConfigError(std::move(v));
}

DynamicsSpec ScenarioConfig::dynamics_spec(Dynamics d) const {
    DynamicsSpec s;
    s.kind = d;
    s.params = params;
    s.rates = phen_rates;
    s.n_max = n_max;
    s.pm_damping_factor = pm_damping_factor;
    s.global_gamma = global_gamma;
    s.frame = frame;
    return s;
}

IntegratorConfig ScenarioConfig::integrator_for(Dynamics d) const {
    IntegratorConfig c = integrator;
    if (d == Dynamics::Global) c.method = global_method;
    return c;
}

// ---- parsing --------------------------------------------------------------------

ScenarioConfig parse_config(const std::string& text, const ParseOptions& opt) {
    pt::ptree root;
    try {
        std::istringstream is(text);
        pt::read_ini(is, root);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError({"parse error at line " + std::to_string(e.line()) + ": " + e.message()});
    }

    std::vector<std::string> errors;
    std::vector<std::string> unknown;
    for (const auto& [key, child] : root) {
        const auto& sch = schema();
        if (child.empty()) {
            const bool empty_section = !key.empty() && sch.count(key) && child.data().empty();
            if (!empty_section && !sch.at("").count(key)) unknown.push_back(key);
            continue;
        }
        auto it = sch.find(key);
        if (it == sch.end() || key.empty()) {
            unknown.push_back("[" + key + "]");
            continue;
        }
        for (const auto& [k, _] : child) {
            if (!it->second.count(k)) unknown.push_back(key + "." + k);
        }
    }
    for (const auto& u : unknown) {
        const std::string msg = "unknown key '" + u + "'";
        if (opt.strict) errors.push_back(msg);
        else if (opt.warnings) opt.warnings->push_back(msg);
    }

    const Reader r(root, errors);
    ScenarioConfig c;
    c.name = r.str("name").value_or("");

    if (auto s = r.str("initial_state")) {
        try {
            c.initial_state = parse_ket(*s);
        } catch (const std::exception& e) {
            errors.push_back(std::string("initial_state: ") + e.what());
        }
    } else {
        errors.push_back("missing required key 'initial_state'");
    }

    if (auto s = r.str("dynamics")) {
        for (const auto& d : split_list(*s, ",")) {
            try {
                c.dynamics.push_back(parse_dynamics(d));
            } catch (const std::exception& e) {
                errors.push_back(std::string("dynamics: ") + e.what());
            }
        }
    } else {
        errors.push_back("missing required key 'dynamics'");
    }

    if (auto s = r.str("observables")) {
        for (const auto& o : split_list(*s, ",")) {
            try {
                c.observables.push_back(parse_observable(o));
            } catch (const std::exception& e) {
                errors.push_back(std::string("observables: ") + e.what());
            }
        }
    } else {
        c.observables = {Observable::P11};
    }

    r.num("params/omega_s", c.params.omega_s);
    r.num("params/J", c.params.J);
    r.num("params/phi", c.params.phi);
    r.num("params/g0", c.params.g0);
    r.num("params/lambda", c.params.lambda);
    r.num("params/omega_0", c.params.omega_0);

    if (auto m = r.str("integrator/method")) {
        try {
            c.integrator.method = parse_method(*m);
        } catch (const std::exception& e) {
            errors.push_back(e.what());
        }
    }
    c.integrator.dt = 0.0;
    r.num("integrator/dt", c.integrator.dt);
    if (c.integrator.dt == 0.0 && c.params.J > 0 && c.params.lambda > 0) c.integrator.dt = default_dt(c.params);
    c.integrator.t_end = 4.0 * std::numbers::pi / (c.params.J > 0 ? c.params.J : 1.0);
    r.num("integrator/t_end", c.integrator.t_end);
    r.num("integrator/tolerance", c.integrator.tolerance);
    r.num("integrator/record_stride", c.integrator.record_stride);

    r.num("pseudomode/n_max", c.n_max);
    r.num("pseudomode/damping_factor", c.pm_damping_factor);

    if (r.str("phenomenological/rate")) {
        double x = 0.0;
        r.num("phenomenological/rate", x);
        c.phen_rates = PhenomenologicalRates::uniform(x);
    }
    for (const char* k : {"rate_L_up", "rate_L_down", "rate_R_up", "rate_R_down"}) {
        if (!r.str(std::string("phenomenological/") + k)) continue;
        if (!c.phen_rates)
            c.phen_rates = PhenomenologicalRates::uniform(c.params.J > 0 && c.params.lambda > 0
                                                              ? default_phenomenological_rate(c.params)
                                                              : 0.0);
        const std::string key(k);
        double* dst = key == "rate_L_up" ? &c.phen_rates->L_up
                      : key == "rate_L_down" ? &c.phen_rates->L_down
                      : key == "rate_R_up"   ? &c.phen_rates->R_up
                                             : &c.phen_rates->R_down;
        r.num("phenomenological/" + key, *dst);
    }

    if (auto f = r.str("microscopic/frame")) {
        if (*f == "schrodinger") c.frame = Frame::Schrodinger;
        else if (*f == "interaction") c.frame = Frame::Interaction;
        else errors.push_back("microscopic.frame: expected schrodinger or interaction, got '" + *f + "'");
    }

    r.num("global/gamma", c.global_gamma);
    if (auto m = r.str("global/method")) {
        try {
            c.global_method = parse_method(*m);
        } catch (const std::exception& e) {
            errors.push_back(e.what());
        }
    }

    r.boolean("steady_state/enabled", c.steady.enabled);
    r.num("steady_state/threshold", c.steady.threshold);
    r.boolean("steady_state/early_exit", c.steady.early_exit);
    if (c.steady.early_exit) c.steady.enabled = true;

    if (auto s = r.str("output/coherence_pairs")) {
        for (const auto& item : split_list(*s, ";")) {
            const auto kb = split_list(item, "|");
            try {
                if (kb.size() != 2) throw std::invalid_argument("expected 'ket|bra'");
                c.coherence_pairs.push_back({parse_ket(kb[0]), parse_ket(kb[1])});
            } catch (const std::exception& e) {
                errors.push_back("output.coherence_pairs '" + item + "': " + e.what());
            }
        }
    }
    if (auto s = r.str("output/c1_spin")) {
        if (*s == "up") c.c1_spin = Spin::Up;
        else if (*s == "down") c.c1_spin = Spin::Down;
        else errors.push_back("output.c1_spin: expected up or down, got '" + *s + "'");
    }

    for (const auto& v : c.violations()) {
        // Missing keys are already reported once above.
        if (v.rfind("initial_state", 0) == 0 && !r.str("initial_state")) continue;
        if (v.rfind("dynamics must", 0) == 0 && !r.str("dynamics")) continue;
        errors.push_back(v);
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return c;
}

ScenarioConfig load_config(const std::string& path, const ParseOptions& opt) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), opt);
}

std::string to_ini(const ScenarioConfig& c) {
    std::ostringstream os;
    std::vector<std::string> dyn, obs, pairs;
    for (auto d : c.dynamics) dyn.push_back(dynamics_name(d));
    for (auto o : c.observables) obs.push_back(observable_name(o));
    for (const auto& p : c.coherence_pairs) pairs.push_back(initial_state_label(p.ket) + "|" + initial_state_label(p.bra));
    os << "name = " << c.name << "\n"
       << "initial_state = " << initial_state_label(c.initial_state) << "\n"
       << "dynamics = " << join(dyn, ",") << "\n"
       << "observables = " << join(obs, ",") << "\n\n"
       << "[params]\n"
       << "omega_s = " << fmt(c.params.omega_s) << "\nJ = " << fmt(c.params.J) << "\nphi = " << fmt(c.params.phi)
       << "\ng0 = " << fmt(c.params.g0) << "\nlambda = " << fmt(c.params.lambda)
       << "\nomega_0 = " << fmt(c.params.omega_0) << "\n\n"
       << "[integrator]\n"
       << "method = " << method_name(c.integrator.method) << "\ndt = " << fmt(c.integrator.dt)
       << "\nt_end = " << fmt(c.integrator.t_end) << "\ntolerance = " << fmt(c.integrator.tolerance)
       << "\nrecord_stride = " << c.integrator.record_stride << "\n\n"
       << "[pseudomode]\nn_max = " << c.n_max << "\ndamping_factor = " << fmt(c.pm_damping_factor) << "\n\n";
    if (c.phen_rates) {
        os << "[phenomenological]\nrate_L_up = " << fmt(c.phen_rates->L_up)
           << "\nrate_L_down = " << fmt(c.phen_rates->L_down) << "\nrate_R_up = " << fmt(c.phen_rates->R_up)
           << "\nrate_R_down = " << fmt(c.phen_rates->R_down) << "\n\n";
    }
    os << "[microscopic]\nframe = " << (c.frame == Frame::Schrodinger ? "schrodinger" : "interaction") << "\n\n"
       << "[global]\ngamma = " << fmt(c.global_gamma) << "\nmethod = " << method_name(c.global_method) << "\n\n"
       << "[steady_state]\nenabled = " << (c.steady.enabled ? "true" : "false")
       << "\nthreshold = " << fmt(c.steady.threshold) << "\nearly_exit = " << (c.steady.early_exit ? "true" : "false")
       << "\n\n[output]\nc1_spin = " << (c.c1_spin == Spin::Up ? "up" : "down") << "\n";
    if (!pairs.empty()) os << "coherence_pairs = " << join(pairs, "; ") << "\n";
    return os.str();
}

// ---- presets --------------------------------------------------------------------

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> v = {"fig2_hom_offres", "fig2_distill_offres", "fig3_onres",
                                               "fig4_onres_distill", "global_bath", "coeff_table"};
    return v;
}

ScenarioConfig preset(const std::string& name) {
    const std::string hom = "L_up,R_up", distill = "L_up,R_down";
    const std::string off_params = "[params]\nomega_s = 1\nJ = 1\nphi = 0\ng0 = 0.15\nlambda = 1\nomega_0 = 0\n";
    const std::string on_params = "[params]\nomega_s = 1\nJ = 1\nphi = 0\ng0 = 0.1\nlambda = 0.5\nomega_0 = 1\n";
    const std::string off_horizon = "[integrator]\nt_end = 12.566370614359172\nrecord_stride = 10\n";
    const std::string on_horizon = "[integrator]\nt_end = 400\nrecord_stride = 10\n"
                                   "[steady_state]\nenabled = true\nthreshold = 1e-7\nearly_exit = true\n";
    std::string text;
    if (name == "fig2_hom_offres") {
        text = "name = fig2_hom_offres\ninitial_state = " + hom +
               "\ndynamics = closed,phenomenological,microscopic,pseudomode\n"
               "observables = P11,C1,negativity,trace,min_eigenvalue\n" +
               off_params + off_horizon + "[pseudomode]\nn_max = 5\n";
    } else if (name == "fig2_distill_offres") {
        text = "name = fig2_distill_offres\ninitial_state = " + distill +
               "\ndynamics = closed,phenomenological,microscopic,pseudomode\n"
               "observables = P11,concurrence,slocc_success,fidelity_psi_plus,fidelity_psi_minus,coherences\n" +
               off_params + off_horizon +
               "[pseudomode]\nn_max = 5\n[output]\ncoherence_pairs = L_up,R_down|L_down,R_up\n";
    } else if (name == "fig3_onres") {
        text = "name = fig3_onres\ninitial_state = " + hom +
               "\ndynamics = phenomenological,microscopic,pseudomode\n"
               "observables = P11,C1,negativity,coherences,min_eigenvalue\n" +
               on_params + on_horizon +
               "[pseudomode]\nn_max = 5\n[output]\ncoherence_pairs = L_up,L_up|R_up,R_up; L_up,R_up|L_up,L_up\n";
    } else if (name == "fig4_onres_distill") {
        text = "name = fig4_onres_distill\ninitial_state = " + distill +
               "\ndynamics = phenomenological,microscopic,pseudomode\n"
               "observables = P11,negativity,concurrence,slocc_success,fidelity_psi_plus,fidelity_psi_minus,"
               "coherences,min_eigenvalue\n" +
               on_params + on_horizon + "[pseudomode]\nn_max = 5\n[output]\ncoherence_pairs = L_up,R_down|L_down,R_up\n";
    } else if (name == "global_bath") {
        text = "name = global_bath\ninitial_state = " + distill +
               "\ndynamics = closed,global\nobservables = P11,concurrence,slocc_success,trace\n" + off_params +
               off_horizon + "[global]\ngamma = 0.15\nmethod = expm\n";
    } else if (name == "coeff_table") {
        text = "name = coeff_table\ninitial_state = " + hom + "\ndynamics = microscopic\nobservables = P11\n" +
               on_params + "[integrator]\nt_end = 20\nrecord_stride = 10\n";
    } else {
        throw ConfigError({"unknown preset '" + name + "' (known: " + join(preset_names(), ", ") + ")"});
    }
    return parse_config(text);
}

// ---- sweeps ---------------------------------------------------------------------

const std::vector<std::string>& sweep_axes() {
    static const std::vector<std::string> v = {"omega_s", "J",      "phi",   "g0", "lambda", "omega_0",
                                               "n_max",   "damping_factor", "gamma", "dt", "t_end"};
    return v;
}

void apply_axis(ScenarioConfig& c, const std::string& axis, double value) {
    if (axis == "omega_s") c.params.omega_s = value;
    else if (axis == "J") c.params.J = value;
    else if (axis == "phi") c.params.phi = value;
    else if (axis == "g0") c.params.g0 = value;
    else if (axis == "lambda") c.params.lambda = value;
    else if (axis == "omega_0") c.params.omega_0 = value;
    else if (axis == "n_max") {
        if (value != std::floor(value)) throw ConfigError({"n_max sweep values must be integers"});
        c.n_max = static_cast<int>(value);
    } else if (axis == "damping_factor") c.pm_damping_factor = value;
    else if (axis == "gamma") c.global_gamma = value;
    else if (axis == "dt") c.integrator.dt = value;
    else if (axis == "t_end") c.integrator.t_end = value;
    else throw ConfigError({"unknown sweep axis '" + axis + "' (known: " + join(sweep_axes(), ", ") + ")"});
}

}  // namespace bosedeph
