// scenario.cpp

#include "bosedeph/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include <openssl/evp.h>

#include "bosedeph/bath.hpp"

namespace bosedeph {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kTruncationThreshold = 1e-4;  // top pseudomode level population
constexpr double kPositivityTolerance = 1e-7;

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json params_json(const ModelParams& p) {
    return {{"omega_s", p.omega_s}, {"J", p.J},          {"phi", p.phi},
            {"g0", p.g0},           {"lambda", p.lambda}, {"omega_0", p.omega_0}};
}

json config_json(const ScenarioConfig& c) {
    json dyn = json::array(), obs = json::array();
    for (auto d : c.dynamics) dyn.push_back(dynamics_name(d));
    for (auto o : c.observables) obs.push_back(observable_name(o));
    const auto rates = c.phen_rates.value_or(PhenomenologicalRates::uniform(default_phenomenological_rate(c.params)));
    return {{"name", c.name},
            {"initial_state", initial_state_label(c.initial_state)},
            {"dynamics", dyn},
            {"observables", obs},
            {"params", params_json(c.params)},
            {"integrator",
             {{"method", method_name(c.integrator.method)},
              {"dt", c.integrator.dt},
              {"t_end", c.integrator.t_end},
              {"tolerance", c.integrator.tolerance},
              {"record_stride", c.integrator.record_stride}}},
            {"pseudomode", {{"n_max", c.n_max}, {"damping_factor", c.pm_damping_factor}}},
            {"phenomenological",
             {{"rate_L_up", rates.L_up},
              {"rate_L_down", rates.L_down},
              {"rate_R_up", rates.R_up},
              {"rate_R_down", rates.R_down},
              {"derived", !c.phen_rates.has_value()}}},
            {"microscopic", {{"frame", c.frame == Frame::Schrodinger ? "schrodinger" : "interaction"}}},
            {"global", {{"gamma", c.global_gamma}, {"method", method_name(c.global_method)}}},
            {"steady_state",
             {{"enabled", c.steady.enabled}, {"threshold", c.steady.threshold}, {"early_exit", c.steady.early_exit}}}};
}

std::vector<std::pair<std::size_t, std::size_t>> coherence_indices(const ScenarioConfig& c, const FockBasis& b) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const auto index = [&](const std::vector<ModeId>& ket) {
        Occupation o(b.modes().size(), 0);
        for (auto m : ket) ++o[b.slot(m)];
        const auto i = b.index_of(o);
        if (!i) throw ConfigError({"coherence ket outside the basis"});
        return *i;
    };
    for (const auto& p : c.coherence_pairs) out.emplace_back(index(p.ket), index(p.bra));
    return out;
}

// Index of the record time closest to t, if it lies within half a record spacing.
std::optional<std::size_t> record_near(const std::vector<double>& times, double t) {
    if (times.size() < 2) return std::nullopt;
    const double h = times[1] - times[0];
    const auto k = static_cast<std::size_t>(std::llround(t / h));
    if (k >= times.size() || std::abs(times[k] - t) > 0.5 * h + 1e-12) return std::nullopt;
    return k;
}

struct DynamicsRecords {
    std::vector<ObservableRecord> rec;
    std::vector<double> trace, min_eig;
};

DynamicsRecords evaluate(const Trajectory& tr, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                         Spin spin) {
    DynamicsRecords r;
    r.rec.reserve(tr.states.size());
    for (std::size_t k = 0; k < tr.states.size(); ++k) {
        const DensityMatrix rho(tr.basis, tr.states[k]);
        r.rec.push_back(evaluate_observables(rho, tr.times[k], pairs, spin));
        r.trace.push_back(rho.rho.trace().real());
        r.min_eig.push_back(rho.min_eigenvalue());
    }
    return r;
}

std::string fixed_index(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%03zu", i);
    return buf;
}

}  // namespace

// ---- TimeSeries -------------------------------------------------------------------

void TimeSeries::add_column(std::string name, std::vector<double> values) {
    if (values.size() != times.size()) throw std::invalid_argument("column '" + name + "' length differs from time grid");
    if (has_column(name)) throw std::invalid_argument("duplicate column '" + name + "'");
    names.push_back(std::move(name));
    columns.push_back(std::move(values));
}

bool TimeSeries::has_column(const std::string& name) const {
    return std::find(names.begin(), names.end(), name) != names.end();
}

const std::vector<double>& TimeSeries::column(const std::string& name) const {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw std::out_of_range("no column '" + name + "'");
    return columns[static_cast<std::size_t>(it - names.begin())];
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string TimeSeries::to_csv() const {
    std::string s = "t";
    for (const auto& n : names) s += "," + n;
    s += "\n";
    for (std::size_t k = 0; k < times.size(); ++k) {
        s += format_number(times[k]);
        for (const auto& c : columns) s += "," + format_number(c[k]);
        s += "\n";
    }
    return s;
}

// ---- helpers ------------------------------------------------------------------------

std::string git_blob_sha1(const std::string& content) {
    const std::string header = "blob " + std::to_string(content.size()) + std::string(1, '\0');
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, header.data(), header.size()) != 1 ||
        EVP_DigestUpdate(ctx, content.data(), content.size()) != 1 || EVP_DigestFinal_ex(ctx, md, &len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("SHA-1 digest failed");
    }
    EVP_MD_CTX_free(ctx);
    std::string hex;
    char buf[3];
    for (unsigned i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

void write_file_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ostringstream tid;
    tid << std::this_thread::get_id();
    fs::path tmp = path;
    tmp += ".tmp." + tid.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

// ---- run_scenario ---------------------------------------------------------------------

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    ScenarioResult res;
    res.config = cfg;

    const auto basis = system_basis(2);
    const DensityMatrix rho0 = DensityMatrix::pure(basis, fock_ket(*basis, cfg.initial_state));
    const auto pairs = coherence_indices(cfg, *basis);

    res.series.times = cfg.integrator.record_grid();
    json dyn_summary = json::object();
    std::map<Dynamics, DynamicsRecords> records;

    for (auto d : cfg.dynamics) {
        Trajectory tr;
        try {
            tr = evolve(cfg.dynamics_spec(d), rho0, cfg.integrator_for(d), cfg.steady);
        } catch (const NumericalError& e) {
            throw NumericalError(cfg.name + " / " + dynamics_name(d) + ": " + e.what());
        }
        auto r = evaluate(tr, pairs, cfg.c1_spin);
        const std::string pre = dynamics_name(d) + ".";

        for (auto o : cfg.observables) {
            const auto col = [&](auto get) {
                std::vector<double> v;
                v.reserve(r.rec.size());
                for (std::size_t k = 0; k < r.rec.size(); ++k) v.push_back(get(k));
                return v;
            };
            switch (o) {
                case Observable::P11: res.series.add_column(pre + "P11", col([&](auto k) { return r.rec[k].P11; })); break;
                case Observable::C1: res.series.add_column(pre + "C1", col([&](auto k) { return r.rec[k].C1; })); break;
                case Observable::Negativity:
                    res.series.add_column(pre + "negativity", col([&](auto k) { return r.rec[k].negativity; }));
                    break;
                case Observable::Concurrence:
                    res.series.add_column(pre + "concurrence", col([&](auto k) { return r.rec[k].concurrence; }));
                    break;
                case Observable::FidelityPsiPlus:
                    res.series.add_column(pre + "fidelity_psi_plus",
                                          col([&](auto k) { return r.rec[k].fidelity_psi_plus; }));
                    break;
                case Observable::FidelityPsiMinus:
                    res.series.add_column(pre + "fidelity_psi_minus",
                                          col([&](auto k) { return r.rec[k].fidelity_psi_minus; }));
                    break;
                case Observable::SloccSuccess:
                    res.series.add_column(pre + "slocc_success",
                                          col([&](auto k) { return r.rec[k].slocc_success_prob; }));
                    break;
                case Observable::Coherences:
                    for (std::size_t j = 0; j < pairs.size(); ++j) {
                        const auto label = pre + cfg.coherence_pairs[j].label();
                        res.series.add_column(label + ".re", col([&](auto k) { return r.rec[k].coherences[j].real(); }));
                        res.series.add_column(label + ".im", col([&](auto k) { return r.rec[k].coherences[j].imag(); }));
                    }
                    break;
                case Observable::Trace: res.series.add_column(pre + "trace", r.trace); break;
                case Observable::MinEigenvalue: res.series.add_column(pre + "min_eigenvalue", r.min_eig); break;
            }
        }

        // Summary block for this dynamics.
        json s;
        const bool exact_lindblad = d != Dynamics::Microscopic;
        s["diagnostics"] = {{"max_trace_drift", tr.diag.max_trace_drift},
                            {"max_hermiticity_error", tr.diag.max_hermiticity_error},
                            {"min_eigenvalue", tr.diag.min_eigenvalue},
                            {"t_min_eigenvalue", tr.diag.t_min_eigenvalue},
                            {"positivity_ok", tr.diag.min_eigenvalue >= -kPositivityTolerance},
                            {"positivity_enforced", exact_lindblad}};
        if (d == Dynamics::Pseudomode) {
            s["truncation"] = {{"n_max", cfg.n_max},
                               {"max_top_level_population", tr.diag.max_top_level_population},
                               {"threshold", kTruncationThreshold},
                               {"ok", tr.diag.max_top_level_population < kTruncationThreshold}};
        }
        s["integration"] = {{"method", method_name(cfg.integrator_for(d).method)},
                            {"rhs_evaluations", tr.stats.rhs_evaluations},
                            {"accepted_steps", tr.stats.accepted_steps},
                            {"rejected_steps", tr.stats.rejected_steps},
                            {"integrated_points", tr.integrated_points},
                            {"stopped_early", tr.stats.stopped_early}};
        if (tr.steady) {
            s["steady_state"] = {{"converged", tr.steady->converged},
                                 {"t_reached", tr.steady->t_reached},
                                 {"residual", tr.steady->residual},
                                 {"threshold", cfg.steady.threshold},
                                 {"rows_frozen_after", tr.steady->converged && cfg.steady.early_exit
                                                           ? json(tr.steady->t_reached)
                                                           : json(nullptr)}};
        }
        const auto& last = r.rec.back();
        s["final"] = {{"t", tr.times.back()},
                      {"P11", last.P11},
                      {"C1", last.C1},
                      {"negativity", last.negativity},
                      {"negativity_raw", last.negativity_raw},
                      {"concurrence", number_or_null(last.concurrence)},
                      {"fidelity_psi_plus", number_or_null(last.fidelity_psi_plus)},
                      {"fidelity_psi_minus", number_or_null(last.fidelity_psi_minus)},
                      {"slocc_success", last.slocc_success_prob}};

        // Post-selected concurrence: maximum and the two candidate time stamps Jt = pi/2 and Jt = pi.
        double cmax = -1.0, tmax = 0.0;
        for (const auto& x : r.rec) {
            if (std::isfinite(x.concurrence) && x.concurrence > cmax + 1e-12) {
                cmax = x.concurrence;
                tmax = x.t;
            }
        }
        json slocc;
        slocc["max_concurrence"] = cmax >= 0 ? json(cmax) : json(nullptr);
        slocc["t_max_concurrence"] = cmax >= 0 ? json(tmax) : json(nullptr);
        slocc["Jt_max_concurrence"] = cmax >= 0 ? json(tmax * cfg.params.J) : json(nullptr);
        for (auto [key, jt] : {std::pair{"Jt_half_pi", std::numbers::pi / 2}, std::pair{"Jt_pi", std::numbers::pi}}) {
            const auto k = record_near(tr.times, jt / cfg.params.J);
            slocc[key] = k ? json{{"t", tr.times[*k]},
                                  {"concurrence", number_or_null(r.rec[*k].concurrence)},
                                  {"slocc_success", r.rec[*k].slocc_success_prob}}
                           : json(nullptr);
        }
        s["slocc"] = slocc;
        dyn_summary[dynamics_name(d)] = s;

        records.emplace(d, std::move(r));
        res.trajectories.emplace(d, std::move(tr));
    }

    json pairwise = json::array();
    for (std::size_t i = 0; i < cfg.dynamics.size(); ++i) {
        for (std::size_t j = i + 1; j < cfg.dynamics.size(); ++j) {
            const auto a = cfg.dynamics[i], b = cfg.dynamics[j];
            const auto& ta = res.trajectories.at(a);
            const auto& tb = res.trajectories.at(b);
            double dp = 0.0, tdmax = 0.0;
            for (std::size_t k = 0; k < ta.states.size(); ++k) {
                dp = std::max(dp, std::abs(records.at(a).rec[k].P11 - records.at(b).rec[k].P11));
                tdmax = std::max(tdmax, trace_distance(ta.states[k], tb.states[k]));
            }
            pairwise.push_back({{"a", dynamics_name(a)},
                                {"b", dynamics_name(b)},
                                {"t", ta.times.back()},
                                {"fidelity", fidelity(ta.states.back(), tb.states.back())},
                                {"trace_distance", trace_distance(ta.states.back(), tb.states.back())},
                                {"max_trace_distance", tdmax},
                                {"max_abs_delta_P11", dp}});
        }
    }

    res.summary = {{"scenario", config_json(cfg)},
                   {"config_ini", to_ini(cfg)},
                   {"rows", res.series.times.size()},
                   {"dynamics", dyn_summary},
                   {"pairwise", pairwise},
                   {"bath", {{"negative_frequency_weight", negative_frequency_weight(cfg.params)},
                             {"phenomenological_default_rate", default_phenomenological_rate(cfg.params)}}}};
    return res;
}

WrittenFiles write_outputs(ScenarioResult& result, const fs::path& dir) {
    WrittenFiles w{dir / (result.config.name + ".csv"), dir / (result.config.name + ".summary.json")};
    const std::string csv = result.series.to_csv();
    write_file_atomic(w.csv, csv);
    result.summary["csv"] = {{"file", w.csv.filename().string()},
                             {"rows", result.series.times.size()},
                             {"columns", json(result.series.names)},
                             {"git_blob_sha1", git_blob_sha1(csv)}};
    write_file_atomic(w.json, result.summary.dump(2) + "\n");
    return w;
}

// ---- sweeps ---------------------------------------------------------------------------

SweepResult run_sweep(const ScenarioConfig& base, const std::string& axis, const std::vector<double>& values,
                      unsigned workers, const fs::path& dir) {
    if (values.empty()) throw ConfigError({"sweep needs at least one value"});
    if (std::find(sweep_axes().begin(), sweep_axes().end(), axis) == sweep_axes().end()) {
        ScenarioConfig probe = base;
        apply_axis(probe, axis, values.front());  // throws with the list of axes
    }
    std::vector<ScenarioConfig> points;
    std::vector<std::string> problems;
    for (std::size_t i = 0; i < values.size(); ++i) {
        ScenarioConfig c = base;
        apply_axis(c, axis, values[i]);
        c.name = base.name + "_" + axis + "_" + fixed_index(i);
        for (const auto& v : c.violations()) problems.push_back(axis + "=" + format_number(values[i]) + ": " + v);
        points.push_back(std::move(c));
    }
    if (!problems.empty()) throw ConfigError(problems);

    const fs::path point_dir = dir / (base.name + "_sweep_" + axis);
    std::vector<std::optional<ScenarioResult>> results(points.size());
    std::vector<WrittenFiles> files(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                auto r = run_scenario(points[i]);
                files[i] = write_outputs(r, point_dir);
                // Drop the bulky time series; keep final states and the summary.
                r.series = TimeSeries{};
                results[i] = std::move(r);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(points.size())));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < n; ++k) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    // Aggregate, one row per swept value in input order.
    std::vector<std::string> header = {axis};
    for (auto d : base.dynamics) {
        for (const char* k : {"converged", "t_reached", "residual", "P11", "negativity", "concurrence",
                              "fidelity_psi_plus", "trace_distance_to_reference"})
            header.push_back(dynamics_name(d) + "." + k);
    }
    for (std::size_t i = 0; i < base.dynamics.size(); ++i)
        for (std::size_t j = i + 1; j < base.dynamics.size(); ++j)
            for (const char* k : {"fidelity", "trace_distance"})
                header.push_back(dynamics_name(base.dynamics[i]) + "_vs_" + dynamics_name(base.dynamics[j]) + "." + k);

    std::string csv;
    for (std::size_t i = 0; i < header.size(); ++i) csv += (i ? "," : "") + header[i];
    csv += "\n";
    const auto& ref = *results.back();
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& r = *results[i];
        std::vector<double> row = {values[i]};
        for (auto d : base.dynamics) {
            const auto& tr = r.trajectories.at(d);
            const auto& s = r.summary["dynamics"][dynamics_name(d)];
            const bool has_ss = s.contains("steady_state");
            row.push_back(has_ss ? (s["steady_state"]["converged"].get<bool>() ? 1.0 : 0.0) : std::nan(""));
            row.push_back(has_ss ? s["steady_state"]["t_reached"].get<double>() : std::nan(""));
            row.push_back(has_ss ? s["steady_state"]["residual"].get<double>() : std::nan(""));
            const auto get = [&](const char* k) {
                const auto& v = s["final"][k];
                return v.is_null() ? std::nan("") : v.get<double>();
            };
            row.push_back(get("P11"));
            row.push_back(get("negativity"));
            row.push_back(get("concurrence"));
            row.push_back(get("fidelity_psi_plus"));
            row.push_back(trace_distance(tr.states.back(), ref.trajectories.at(d).states.back()));
        }
        for (const auto& pw : r.summary["pairwise"]) {
            row.push_back(pw["fidelity"].get<double>());
            row.push_back(pw["trace_distance"].get<double>());
        }
        for (std::size_t k = 0; k < row.size(); ++k) csv += (k ? "," : "") + format_number(row[k]);
        csv += "\n";
    }

    SweepResult out;
    out.aggregate_csv = dir / (base.name + "_sweep_" + axis + ".csv");
    out.aggregate = csv;
    out.points = files;
    write_file_atomic(out.aggregate_csv, csv);
    return out;
}

// ---- coefficient table --------------------------------------------------------------

TimeSeries coeff_table(const ModelParams& p, const IntegratorConfig& grid, int n_baths) {
    p.validate();
    TimeSeries ts;
    ts.times = grid.record_grid();
    std::vector<std::vector<double>> c(8);
    for (double t : ts.times) {
        const auto cs = coefficients(t, p);
        const auto e = nonmarkov_spectrum(t, p, n_baths);
        for (auto [k, v] : {std::pair{0, cs.alpha.real()}, {1, cs.alpha.imag()}, {2, cs.beta.real()},
                            {3, cs.beta.imag()}, {4, cs.kappa.real()}, {5, cs.kappa.imag()}, {6, e[0]}, {7, e[1]}})
            c[static_cast<std::size_t>(k)].push_back(v);
    }
    const char* names[] = {"alpha.re", "alpha.im", "beta.re", "beta.im", "kappa.re", "kappa.im", "D.eig1", "D.eig2"};
    for (std::size_t k = 0; k < 8; ++k) ts.add_column(names[k], std::move(c[k]));
    return ts;
}

}  // namespace bosedeph
