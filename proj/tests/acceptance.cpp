// acceptance.cpp — Acceptance runner: one PASS/FAIL line per criterion
//
// Usage: acceptance [--only N]. Exit status is 0 only when every selected
// criterion passes. Sub-check lines show the measured value next to the
// required bound, so a failure documents itself.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bosedeph/bath.hpp"
#include "bosedeph/config.hpp"
#include "bosedeph/linalg.hpp"
#include "bosedeph/observables.hpp"
#include "oracles/quadrature.hpp"

using namespace bosedeph;

namespace {

constexpr double kPi = std::numbers::pi;

struct Check {
    std::string what;
    std::string measured;
    bool ok{false};
};

struct Outcome {
    std::vector<Check> checks;
    std::vector<std::string> info;

    void add(const std::string& what, double value, const std::string& bound, bool ok) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6g", value);
        checks.push_back({what, std::string(buf) + " (" + bound + ")", ok});
    }
    void note(const std::string& s) { info.push_back(s); }
    bool passed() const {
        for (const auto& c : checks)
            if (!c.ok) return false;
        return !checks.empty();
    }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

IntegratorConfig grid(double t_end, double dt, int stride) {
    IntegratorConfig c;
    c.t_end = t_end;
    c.dt = dt;
    c.record_stride = stride;
    return c;
}

DensityMatrix ket(const BasisPtr& b, std::vector<ModeId> modes) { return DensityMatrix::pure(b, fock_ket(*b, modes)); }

DynamicsSpec spec_of(const ScenarioConfig& cfg, Dynamics d) { return cfg.dynamics_spec(d); }

double max_td(const Trajectory& a, const Trajectory& b) {
    double m = 0;
    for (std::size_t k = 0; k < a.states.size(); ++k) m = std::max(m, trace_distance(a.states[k], b.states[k]));
    return m;
}

// ---- shared trajectories ------------------------------------------------------------

struct SteadyRun {
    std::map<Dynamics, Trajectory> tr;
};

std::map<std::string, SteadyRun> steady_cache;

const SteadyRun& steady_run(const std::string& preset_name) {
    auto it = steady_cache.find(preset_name);
    if (it != steady_cache.end()) return it->second;
    const auto cfg = preset(preset_name);
    const auto b = system_basis(2);
    const auto rho0 = DensityMatrix::pure(b, fock_ket(*b, cfg.initial_state));
    SteadyRun run;
    for (Dynamics d : cfg.dynamics)
        run.tr.emplace(d, evolve(spec_of(cfg, d), rho0, cfg.integrator_for(d), cfg.steady));
    return steady_cache.emplace(preset_name, std::move(run)).first->second;
}

std::map<std::string, std::map<Dynamics, Trajectory>> fig2_cache;

// Off-resonance presets on [0, 4 pi], every dynamics of the preset.
const std::map<Dynamics, Trajectory>& fig2_run(const std::string& preset_name) {
    auto it = fig2_cache.find(preset_name);
    if (it != fig2_cache.end()) return it->second;
    const auto cfg = preset(preset_name);
    const auto b = system_basis(2);
    const auto rho0 = DensityMatrix::pure(b, fock_ket(*b, cfg.initial_state));
    std::map<Dynamics, Trajectory> m;
    for (Dynamics d : cfg.dynamics) m.emplace(d, evolve(spec_of(cfg, d), rho0, cfg.integrator_for(d)));
    return fig2_cache.emplace(preset_name, std::move(m)).first->second;
}

// ---- criteria -----------------------------------------------------------------------

Outcome criterion_1() {
    Outcome o;
    const auto b = system_basis(2);
    ModelParams p;
    const auto ops = build_operator_set(p, b);
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> ut(0.0, 20.0);
    double bch = 0;
    for (int k = 0; k < 20; ++k) {
        const double t = ut(rng);
        const Matrix U = linalg::unitary_propagator(ops.H_D.matrix(), -t);  // e^{i H_D t}
        const Matrix lhs = U * ops.sigma_z_L.matrix() * U.adjoint();
        const Matrix rhs = ops.A.matrix() + std::cos(p.J * t) * ops.B.matrix() + std::sin(p.J * t) * ops.C.matrix();
        bch = std::max(bch, max_abs(lhs - rhs));
    }
    o.add("BCH closure, 20 random times, max error", bch, "< 1e-9", bch < 1e-9);

    const Matrix bc = commutator(ops.B, ops.C).matrix();
    const Matrix target = cplx(0, 1.0 / p.J) * ops.H_D.matrix();
    const double plus = max_abs(bc - target);
    o.add("[B,C] = (i/J) H_D, max error", plus, "< 1e-9", plus < 1e-9);
    o.note(fmt("[B,C] + (i/J) H_D max error %.3g: the commutator closes with the opposite sign", max_abs(bc + target)));

    const double hs = max_abs(commutator(ops.H_S, ops.H_D).matrix());
    o.add("[H_S,H_D] max element", hs, "< 1e-12", hs < 1e-12);
    return o;
}

Outcome criterion_2() {
    Outcome o;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ul(0.2, 2.0), uw(0.0, 2.0);
    std::vector<std::pair<double, double>> sets = {{1.0, 0.0}};
    for (int k = 0; k < 4; ++k) sets.emplace_back(ul(rng), uw(rng));
    double worst = 0, imag_zero = 0;
    // NaN-propagating maximum, so a broken value cannot hide behind std::max.
    const auto track = [](double& acc, double e) { acc = std::isnan(e) || std::isnan(acc) ? NAN : std::max(acc, e); };
    for (const auto& [lambda, omega_0] : sets) {
        ModelParams p;
        p.g0 = 1.0;
        p.lambda = lambda;
        p.omega_0 = omega_0;
        for (int k = 0; k < 50; ++k) {
            const double t = 20.0 * k / 49.0;
            track(worst, std::abs(alpha(t, p) - oracle::alpha(t, lambda, omega_0)));
            track(worst, std::abs(beta(t, p) - oracle::beta(t, p.J, lambda, omega_0)));
            track(worst, std::abs(kappa(t, p) - oracle::kappa(t, p.J, lambda, omega_0)));
            // Defining integral of the correlation function (itself checked against its Fourier oracle).
            const cplx g = oracle::integrate([&](double s) { return bath_correlation(t, s, p); }, 0.0, t);
            track(worst, std::abs(gamma_short_time(t, p) - g));
            if (omega_0 == 0.0)
                for (cplx c : {alpha(t, p), beta(t, p), kappa(t, p), gamma_short_time(t, p)})
                    track(imag_zero, std::abs(c.imag()));
        }
    }
    o.add("alpha, beta, kappa, gamma vs quadrature, 50 times x 5 sets, max error", worst, "< 1e-8", !std::isnan(worst) && worst < 1e-8);
    o.add("omega_0 = 0 imaginary parts, max", imag_zero, "< 1e-12", !std::isnan(imag_zero) && imag_zero < 1e-12);
    return o;
}

Outcome criterion_3() {
    Outcome o;
    const auto b = system_basis(2);
    std::mt19937 rng(99);
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ut(0.0, 20.0);
    double worst = 0;
    for (const auto& name : {"fig3_onres", "fig2_hom_offres"}) {
        const auto p = preset(name).params;
        const auto ops = CanonicalOperators::from(build_operator_set(p, b));
        const CanonicalGenerator can(p, ops);
        const PrecanonicalGenerator pre(p, ops);
        std::vector<double> times;
        for (int k = 0; k < 10; ++k) times.push_back(ut(rng));
        for (int r = 0; r < 20; ++r) {
            Matrix x(10, 10);
            for (Eigen::Index i = 0; i < 10; ++i)
                for (Eigen::Index j = 0; j < 10; ++j) x(i, j) = cplx(nd(rng), nd(rng));
            Matrix rho = x * x.adjoint();
            rho /= rho.trace();
            for (double t : times) worst = std::max(worst, max_abs(can(t, rho) - pre(t, rho)));
        }
    }
    o.add("canonical vs pre-canonical generator, 20 states x 10 times x 2 parameter sets", worst, "< 1e-10",
          worst < 1e-10);
    return o;
}

Outcome criterion_4() {
    Outcome o;
    const auto b = system_basis(2);
    ModelParams p;
    const Operator H = build_H_S(p, b) + build_H_D(p, b);
    const auto cfg = grid(4 * kPi, 0.01, 1);
    auto times = cfg.record_grid();
    times.push_back(kPi / 2);
    const auto psi = evolve_closed(H, fock_ket(*b, {ModeId::LUp, ModeId::RUp}), times);
    double worst = 0;
    for (std::size_t k = 0; k + 1 < times.size(); ++k)
        worst = std::max(worst, std::abs(coincidence_probability(DensityMatrix::pure(b, psi[k])) -
                                         std::pow(std::cos(p.J * times[k]), 2)));
    const double dip = coincidence_probability(DensityMatrix::pure(b, psi.back()));
    o.add("|P11 - cos^2(Jt)| over Jt in [0, 4 pi]", worst, "< 1e-9", worst < 1e-9);
    o.add("P11 at Jt = pi/2", dip, "< 1e-12", dip < 1e-12);
    return o;
}

Outcome criterion_5() {
    Outcome o;
    auto cfg = preset("fig2_hom_offres");
    const auto b = system_basis(2);
    const auto rho0 = ket(b, cfg.initial_state);
    const auto g = grid(2 * kPi, 0.01, 1);
    cfg.n_max = 5;
    std::map<Dynamics, std::vector<double>> p11;
    std::vector<double> times;
    for (Dynamics d : {Dynamics::Microscopic, Dynamics::Phenomenological, Dynamics::Pseudomode}) {
        const auto tr = evolve(spec_of(cfg, d), rho0, g);
        times = tr.times;
        for (const auto& s : tr.states) p11[d].push_back(coincidence_probability(DensityMatrix(b, s)));
    }
    const auto& m = p11[Dynamics::Microscopic];
    std::size_t kmin = 0;
    for (std::size_t k = 0; k < m.size(); ++k)
        if (times[k] <= kPi && m[k] < m[kmin]) kmin = k;
    o.add("microscopic dip minimum P11", m[kmin], "> 0", m[kmin] > 0);
    o.add("microscopic dip location Jt", times[kmin], "> pi/2 = 1.5708", times[kmin] > kPi / 2);
    double dm = 0, dp = 0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        dm = std::max(dm, std::abs(m[k] - p11[Dynamics::Pseudomode][k]));
        dp = std::max(dp, std::abs(p11[Dynamics::Phenomenological][k] - p11[Dynamics::Pseudomode][k]));
    }
    o.add("max|P11 micro - P11 pm| over Jt in [0, 2 pi]", dm, fmt("< max|P11 phen - P11 pm| = %.6g", dp), dm < dp);
    return o;
}

void steady_state_checks(Outcome& o, const std::string& preset_name) {
    const auto& run = steady_run(preset_name);
    for (const auto& [d, tr] : run.tr) {
        const bool conv = tr.steady && tr.steady->converged;
        o.add(dynamics_name(d) + " steady state reached at t", conv ? tr.steady->t_reached : NAN,
              "residual < 1e-7 within t_end", conv);
    }
    const auto& mi = run.tr.at(Dynamics::Microscopic).steady->rho_ss;
    const auto& pm = run.tr.at(Dynamics::Pseudomode).steady->rho_ss;
    const double F = fidelity(mi.rho, pm.rho), T = trace_distance(mi.rho, pm.rho);
    o.add("steady-state fidelity microscopic vs pseudomode", F, ">= 0.999", F >= 0.999);
    o.add("steady-state trace distance microscopic vs pseudomode", T, "<= 0.02", T <= 0.02);
}

// Same comparison with the pseudomode damped at rate lambda instead of 2 lambda (reported, not checked).
void damping_convention_note(Outcome& o, const std::string& preset_name) {
    const auto cfg = preset(preset_name);
    const auto b = system_basis(2);
    auto s = spec_of(cfg, Dynamics::Pseudomode);
    s.pm_damping_factor = 1.0;
    const auto tr = evolve(s, ket(b, cfg.initial_state), cfg.integrator, cfg.steady);
    const auto& mi = steady_run(preset_name).tr.at(Dynamics::Microscopic).steady->rho_ss;
    o.note(fmt("pseudomode damped at rate lambda (correlation e^{-lambda t/2}): fidelity %.6f, trace distance %.6f",
               fidelity(mi.rho, tr.final_state().rho), trace_distance(mi.rho, tr.final_state().rho)));
}

Outcome criterion_6() {
    Outcome o;
    steady_state_checks(o, "fig3_onres");
    const auto& run = steady_run("fig3_onres");
    const double nm = negativity(run.tr.at(Dynamics::Microscopic).steady->rho_ss);
    const double np = negativity(run.tr.at(Dynamics::Pseudomode).steady->rho_ss);
    const double nf = negativity(run.tr.at(Dynamics::Phenomenological).steady->rho_ss);
    o.add("microscopic steady-state negativity", nm, "> 0.01", nm > 0.01);
    o.add("pseudomode steady-state negativity", np, "> 0.01", np > 0.01);
    o.add("phenomenological steady-state negativity", nf, "< 1e-6", nf < 1e-6);
    damping_convention_note(o, "fig3_onres");
    return o;
}

Outcome criterion_7() {
    Outcome o;
    steady_state_checks(o, "fig4_onres_distill");
    const auto& run = steady_run("fig4_onres_distill");
    for (Dynamics d : {Dynamics::Microscopic, Dynamics::Pseudomode}) {
        const auto s = slocc_project(run.tr.at(d).steady->rho_ss);
        const double c = concurrence(s.state);
        const double fp = fidelity_with_pure(s.state, bell_psi_plus());
        const double fm = fidelity_with_pure(s.state, bell_psi_minus());
        o.add(dynamics_name(d) + " steady-state sLOCC concurrence", c, "> 0.1", c > 0.1);
        o.add(dynamics_name(d) + " distilled fidelity with Psi+", fp, fmt("> fidelity with Psi- = %.6g", fm), fp > fm);
    }
    damping_convention_note(o, "fig4_onres_distill");
    return o;
}

Outcome criterion_8() {
    Outcome o;
    auto cfg = preset("global_bath");
    const auto b = system_basis(2);
    for (auto modes : {std::vector<ModeId>{ModeId::LUp, ModeId::RUp}, std::vector<ModeId>{ModeId::LUp, ModeId::RDown}}) {
        const auto rho0 = ket(b, modes);
        const auto g = evolve(spec_of(cfg, Dynamics::Global), rho0, cfg.integrator_for(Dynamics::Global));
        const auto c = evolve(spec_of(cfg, Dynamics::Closed), rho0, cfg.integrator_for(Dynamics::Closed));
        const double td = max_td(g, c);
        o.add("global bath vs closed, input " + initial_state_label(modes) + ", max trace distance", td, "< 1e-10",
              td < 1e-10);
    }
    return o;
}

// Frobenius norm of (full - short) restricted to block-diagonal matrix units.
double short_time_error(const Generator& full, const Generator& st, const BasisPtr& b, double t) {
    double sum = 0;
    Matrix e = Matrix::Zero(10, 10);
    for (std::size_t i = 0; i < b->dim(); ++i)
        for (std::size_t j = 0; j < b->dim(); ++j) {
            if (b->state(i)[0] + b->state(i)[2] != b->state(j)[0] + b->state(j)[2]) continue;
            e.setZero();
            e(Eigen::Index(i), Eigen::Index(j)) = 1.0;
            sum += (full(t, e) - st(t, e)).squaredNorm();
        }
    return std::sqrt(sum);
}

Outcome criterion_9() {
    Outcome o;
    const auto b = system_basis(2);
    for (const auto& name : {"fig2_hom_offres", "fig3_onres"}) {
        const auto p = preset(name).params;
        const auto ops = CanonicalOperators::from(build_operator_set(p, b));
        const CanonicalGenerator full(p, ops);
        const ShortTimeGenerator st(p, ops);
        // Least-squares slope of log error against log Jt on 25 log-spaced points.
        const auto fit = [&](double lo, double hi) {
            std::vector<double> x, y;
            for (int k = 0; k <= 24; ++k) {
                const double jt = lo * std::pow(hi / lo, k / 24.0);
                x.push_back(std::log(jt));
                y.push_back(std::log(short_time_error(full, st, b, jt / p.J)));
            }
            double mx = 0, my = 0;
            for (std::size_t k = 0; k < x.size(); ++k) mx += x[k] / x.size(), my += y[k] / y.size();
            double sxy = 0, sxx = 0;
            for (std::size_t k = 0; k < x.size(); ++k)
                sxy += (x[k] - mx) * (y[k] - my), sxx += (x[k] - mx) * (x[k] - mx);
            return sxy / sxx;
        };
        const double slope = fit(1e-3, 5e-2);
        o.add(std::string("fitted exponent p over Jt in [1e-3, 5e-2], ") + name + " parameters", slope, ">= 2",
              slope >= 2.0);
        o.note(std::string(name) + fmt(": same fit over Jt in [1e-5, 1e-4] gives p = %.6f", fit(1e-5, 1e-4)));
    }
    return o;
}

Outcome criterion_10() {
    Outcome o;
    const auto b = system_basis(2);
    double drift = 0, herm = 0, mineig = 1;
    std::size_t count = 0;
    const auto scan = [&](const Trajectory& tr) {
        ++count;
        drift = std::max(drift, tr.diag.max_trace_drift);
        herm = std::max(herm, tr.diag.max_hermiticity_error);
        if (tr.kind == Dynamics::Pseudomode || tr.kind == Dynamics::Phenomenological)
            mineig = std::min(mineig, tr.diag.min_eigenvalue);
    };
    for (const auto& name : {"fig2_hom_offres", "fig2_distill_offres"})
        for (const auto& [d, tr] : fig2_run(name)) scan(tr);
    for (const auto& name : {"fig3_onres", "fig4_onres_distill"})
        for (const auto& [d, tr] : steady_run(name).tr) scan(tr);
    o.add(fmt("trace drift, max over %.0f trajectories", double(count)), drift, "< 1e-8", drift < 1e-8);
    o.add("Hermiticity error, max", herm, "< 1e-9", herm < 1e-9);
    o.add("pseudomode/phenomenological minimum eigenvalue", mineig, ">= -1e-7", mineig >= -1e-7);

    // Step halving on the off-resonance trajectories: same record grid, half the step.
    double halving = 0;
    for (const auto& name : {"fig2_hom_offres", "fig2_distill_offres"}) {
        const auto cfg = preset(name);
        const auto rho0 = ket(b, cfg.initial_state);
        for (Dynamics d : {Dynamics::Phenomenological, Dynamics::Microscopic, Dynamics::Pseudomode}) {
            const auto a = evolve(spec_of(cfg, d), rho0, grid(2 * kPi, 0.01, 10));
            const auto h = evolve(spec_of(cfg, d), rho0, grid(2 * kPi, 0.005, 20));
            for (std::size_t k = 0; k < a.states.size(); ++k) {
                const auto ra = evaluate_observables(DensityMatrix(b, a.states[k]), a.times[k]);
                const auto rh = evaluate_observables(DensityMatrix(b, h.states[k]), h.times[k]);
                for (auto [x, y] : {std::pair{ra.P11, rh.P11}, std::pair{ra.C1, rh.C1},
                                    std::pair{ra.negativity, rh.negativity}, std::pair{ra.concurrence, rh.concurrence}})
                    if (std::isfinite(x) && std::isfinite(y)) halving = std::max(halving, std::abs(x - y));
            }
        }
    }
    o.add("step halving dt 0.01 -> 0.005, max observable change", halving, "< 1e-6", halving < 1e-6);

    // Truncation: n_max 4 vs 6 over the off-resonance transients.
    for (const auto& name : {"fig2_hom_offres", "fig2_distill_offres"}) {
        auto cfg = preset(name);
        const auto rho0 = ket(b, cfg.initial_state);
        cfg.n_max = 4;
        const auto t4 = evolve(spec_of(cfg, Dynamics::Pseudomode), rho0, cfg.integrator);
        cfg.n_max = 6;
        const auto t6 = evolve(spec_of(cfg, Dynamics::Pseudomode), rho0, cfg.integrator);
        const double td = max_td(t4, t6);
        o.add(std::string("pseudomode n_max 4 vs 6, ") + name + ", max trace distance", td, "< 1e-4", td < 1e-4);
        o.note(std::string(name) + ": top Fock level population at n_max 4 reaches " +
               fmt("%.3g", t4.diag.max_top_level_population));
    }
    return o;
}

Outcome criterion_11() {
    Outcome o;
    const auto p = preset("fig3_onres").params;
    double lowest = 0, t_low = 0;
    for (int k = 1; k <= 20000; ++k) {
        const double t = 1e-3 * k / p.J;
        const double e = nonmarkov_spectrum(t, p)[0];
        if (e < lowest) lowest = e, t_low = t;
    }
    o.add("lowest eigenvalue of D(t) over Jt in (0, 20]", lowest, "< 0", lowest < 0);
    if (lowest < 0) o.note(fmt("reached at Jt = %.3f", t_low * p.J));
    return o;
}

struct Criterion {
    int id;
    const char* title;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    std::optional<int> only;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--only N]\n", argv[0]);
            return 2;
        }
    }

    const std::vector<Criterion> all = {
        {1, "operator identities", criterion_1},
        {2, "coefficient closed forms vs quadrature", criterion_2},
        {3, "canonical form equivalence", criterion_3},
        {4, "closed-system two-boson interference", criterion_4},
        {5, "off-resonance dip: suppression, delay, agreement", criterion_5},
        {6, "on-resonance steady state, equal-spin input", criterion_6},
        {7, "on-resonance steady state, opposite-spin input", criterion_7},
        {8, "global bath leaves the dynamics unchanged", criterion_8},
        {9, "short-time limit exponent", criterion_9},
        {10, "structural invariants", criterion_10},
        {11, "non-Markovianity witness", criterion_11},
    };

    int run = 0, passed = 0;
    for (const auto& c : all) {
        if (only && *only != c.id) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        std::string error;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool ok = error.empty() && o.passed();
        ++run;
        passed += ok;
        std::printf("[%s] criterion %d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", c.id, c.title, secs);
        for (const auto& ch : o.checks)
            std::printf("    %-4s %s: %s\n", ch.ok ? "ok" : "FAIL", ch.what.c_str(), ch.measured.c_str());
        for (const auto& n : o.info) std::printf("    info %s\n", n.c_str());
        if (!error.empty()) std::printf("    error %s\n", error.c_str());
        std::fflush(stdout);
    }
    if (run == 0) {
        std::fprintf(stderr, "no criterion %d\n", only.value_or(0));
        return 2;
    }
    std::printf("acceptance: %d of %d criteria passed\n", passed, run);
    return passed == run ? 0 : 1;
}
