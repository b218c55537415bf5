// test_solvers.cpp — Trajectories of the five dynamics and their diagnostics

#include "doctest.h"

#include <numbers>

#include "bosedeph/observables.hpp"
#include "support.hpp"

using namespace bosedeph;
using testing::ket_state;
using testing::offres_params;
using testing::onres_params;

namespace {

constexpr double kPi = std::numbers::pi;

IntegratorConfig grid(double t_end, double dt = 0.01, int stride = 10, Method m = Method::RK4) {
    IntegratorConfig c;
    c.t_end = t_end;
    c.dt = dt;
    c.record_stride = stride;
    c.method = m;
    return c;
}

double max_trace_distance(const Trajectory& a, const Trajectory& b) {
    REQUIRE(a.states.size() == b.states.size());
    double m = 0;
    for (std::size_t k = 0; k < a.states.size(); ++k) m = std::max(m, trace_distance(a.states[k], b.states[k]));
    return m;
}

DynamicsSpec spec(Dynamics d, const ModelParams& p) {
    DynamicsSpec s;
    s.kind = d;
    s.params = p;
    return s;
}

}  // namespace

TEST_CASE("density matrix validation") {
    const auto b = system_basis(2);
    CHECK_NOTHROW(ket_state(b, {ModeId::LUp, ModeId::RUp}).validate());
    CHECK_THROWS_AS(DensityMatrix(b, Matrix::Identity(10, 10)).validate(), std::invalid_argument);
    Matrix neg = Matrix::Zero(10, 10);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix(b, neg).validate(), std::invalid_argument);
    CHECK_THROWS_AS(DensityMatrix(b, Matrix::Identity(3, 3)), BasisError);
    CHECK_THROWS_AS(parse_dynamics("lindblad"), std::invalid_argument);
    CHECK(parse_dynamics(dynamics_name(Dynamics::Pseudomode)) == Dynamics::Pseudomode);
}

TEST_CASE("closed evolution: trivial Hamiltonian and two-boson interference") {
    const auto b = system_basis(2);
    const Vector lr = fock_ket(*b, {ModeId::LUp, ModeId::RUp});
    const auto still = evolve_closed(Operator::zero(b), lr, {0.0, 1.0, 5.0});
    for (const auto& v : still) CHECK((v - lr).norm() == 0.0);

    ModelParams p;
    const Operator H = build_H_S(p, b) + build_H_D(p, b);
    const Vector ll = fock_ket(*b, {ModeId::LUp, ModeId::LUp});
    const Vector rr = fock_ket(*b, {ModeId::RUp, ModeId::RUp});
    std::vector<double> ts;
    for (int k = 0; k <= 50; ++k) ts.push_back(0.1 * k);
    const auto psi = evolve_closed(H, lr, ts);
    for (std::size_t k = 0; k < ts.size(); ++k) {
        const double t = ts[k];
        CHECK(psi[k].norm() == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(std::norm(lr.dot(psi[k])) == doctest::Approx(std::pow(std::cos(t), 2)).epsilon(1e-12));
        CHECK(std::norm(ll.dot(psi[k])) == doctest::Approx(std::pow(std::sin(t), 2) / 2).epsilon(1e-12));
        CHECK(std::norm(rr.dot(psi[k])) == doctest::Approx(std::pow(std::sin(t), 2) / 2).epsilon(1e-12));
    }
    CHECK_THROWS_AS(evolve_closed(H, 2.0 * lr, ts), std::invalid_argument);
}

TEST_CASE("closed dynamics through the generic driver gives P11 = cos^2(Jt)") {
    const auto b = system_basis(2);
    ModelParams p;
    p.J = 1.3;
    const auto tr = evolve(spec(Dynamics::Closed, p), ket_state(b, {ModeId::LUp, ModeId::RUp}), grid(2 * kPi, 0.01, 7));
    for (std::size_t k = 0; k < tr.times.size(); ++k)
        CHECK(std::abs(coincidence_probability(DensityMatrix(b, tr.states[k])) - std::pow(std::cos(p.J * tr.times[k]), 2)) <
              1e-9);
}

TEST_CASE("zero-rate phenomenological and zero-coupling microscopic dynamics are closed") {
    const auto b = system_basis(2);
    ModelParams p = offres_params();
    p.g0 = 0.0;
    const auto rho0 = ket_state(b, {ModeId::LUp, ModeId::RDown});
    const auto cfg = grid(6.0);
    const auto closed = evolve(spec(Dynamics::Closed, p), rho0, cfg);
    CHECK(max_trace_distance(closed, evolve_phenomenological(rho0, p, PhenomenologicalRates::uniform(0.0), cfg)) < 1e-8);
    CHECK(max_trace_distance(closed, evolve_microscopic(rho0, p, cfg)) < 1e-8);
    CHECK(max_trace_distance(closed, evolve_pseudomode(rho0, p, 3, cfg)) < 1e-8);
}

TEST_CASE("negative phenomenological rate is rejected") {
    const auto b = system_basis(2);
    PhenomenologicalRates r;
    r.L_up = -0.1;
    CHECK_THROWS_AS(evolve_phenomenological(ket_state(b, {ModeId::LUp, ModeId::RUp}), offres_params(), r, grid(1.0)),
                    std::invalid_argument);
}

TEST_CASE("pure number dephasing damps a spin-exchange coherence at four times the rate") {
    // rate * sum over modes of (Delta n)^2 / 2 = 2 rate for |L_up R_down><L_down R_up|
    const auto b = system_basis(2);
    const double g = 0.2;
    std::vector<JumpOperator> jumps;
    for (ModeId m : kSystemModes) jumps.push_back({number(b, m).matrix(), g});
    const LindbladGenerator L(Matrix::Zero(10, 10), jumps);
    const Vector a = fock_ket(*b, {ModeId::LUp, ModeId::RDown}), c = fock_ket(*b, {ModeId::LDown, ModeId::RUp});
    const Vector psi = (a + c) / std::sqrt(2.0);
    const auto tr = evolve_generator(L, DensityMatrix::pure(b, psi), grid(3.0, 0.005, 20));
    for (std::size_t k = 0; k < tr.times.size(); ++k)
        CHECK(a.dot(tr.states[k] * c).real() == doctest::Approx(0.5 * std::exp(-2 * g * tr.times[k])).epsilon(1e-9));
}

TEST_CASE("microscopic dynamics preserves trace and Hermiticity") {
    const auto b = system_basis(2);
    const auto tr = evolve_microscopic(ket_state(b, {ModeId::LUp, ModeId::RUp}), offres_params(), grid(4 * kPi));
    CHECK(tr.diag.max_trace_drift < 1e-10);
    CHECK(tr.diag.max_hermiticity_error < 1e-12);
}

TEST_CASE("microscopic Schrodinger-frame output matches direct Schrodinger-picture integration") {
    const auto b = system_basis(2);
    const auto p = onres_params();
    const auto rho0 = ket_state(b, {ModeId::LUp, ModeId::RDown});
    auto cfg = grid(10.0, 0.01, 50, Method::RK45);
    cfg.tolerance = 1e-12;
    const auto via_frame = evolve_microscopic(rho0, p, cfg, Frame::Schrodinger);
    const SchrodingerCanonicalGenerator L(p, CanonicalOperators::from(build_operator_set(p, b)));
    const auto direct = evolve_generator(L, rho0, cfg);
    double err = 0;
    for (std::size_t k = 0; k < direct.states.size(); ++k) err = std::max(err, max_abs(direct.states[k] - via_frame.states[k]));
    CHECK(err < 1e-9);

    const auto inter = evolve_microscopic(rho0, p, cfg, Frame::Interaction);
    const FreePropagator U(CanonicalOperators::from(build_operator_set(p, b)).H_free);
    for (std::size_t k = 0; k < inter.states.size(); ++k)
        CHECK(max_abs(U.to_schrodinger(inter.states[k], inter.times[k]) - via_frame.states[k]) < 1e-12);
}

TEST_CASE("on-site frequency does not affect any observable") {
    const auto b = system_basis(2);
    ModelParams p1 = offres_params(), p2 = offres_params();
    p2.omega_s = 0.5;
    const auto rho0 = ket_state(b, {ModeId::LUp, ModeId::RDown});
    const auto cfg = grid(5.0);
    CHECK(max_trace_distance(evolve_microscopic(rho0, p1, cfg), evolve_microscopic(rho0, p2, cfg)) < 1e-12);
    CHECK(max_trace_distance(evolve_pseudomode(rho0, p1, 3, cfg), evolve_pseudomode(rho0, p2, 3, cfg)) < 1e-10);
}

TEST_CASE("pseudomode free correlation decays at the Lorentzian rate") {
    // Quantum regression on the embedding with the system decoupled:
    // Tr[c_L e^{Lt}(c_L† rho_0)] = e^{-(i omega_0 + lambda) t} when the damping rate is 2 lambda.
    const auto b = system_basis(2);
    ModelParams p = onres_params();
    const ModelParams p_free = [&] {
        ModelParams q = p;
        q.g0 = 0.0;
        return q;
    }();
    for (double factor : {2.0, 1.0}) {
        const PseudomodeEmbedding pm(b, ket_state(b, {ModeId::LUp, ModeId::RUp}).rho, p_free, 4, factor);
        const auto& ext = pm.extended_basis();
        const Matrix c = ladder_string(ext, {{ModeId::PmL, Ladder::Annihilate}}).matrix();
        const Matrix x0 = c.adjoint() * pm.embed(ket_state(b, {ModeId::LUp, ModeId::RUp}).rho);
        auto cfg = grid(8.0, 0.01, 100);
        integrate([&](double t, const Matrix& y, Matrix& dy) { pm.generator().apply(t, y, dy); }, x0, cfg,
                  [&](std::size_t, double t, const Matrix& y) {
                      const cplx corr = (c * y).trace();
                      const cplx expect = std::exp(-cplx(factor / 2 * p.lambda, p.omega_0) * t);
                      CHECK(std::abs(corr - expect) < 1e-9);
                      return true;
                  });
        if (factor == 2.0) {
            // Matches the bath correlation once scaled by g_pm^2 = g0.
            const double t = 3.0;
            CHECK(std::abs(p.g0 * std::exp(-cplx(p.lambda, p.omega_0) * t) - bath_correlation(t, 0.0, p)) < 1e-15);
        }
    }
}

TEST_CASE("pseudomode embedding: partial trace and block restriction") {
    const auto b = system_basis(2);
    const auto rho0 = ket_state(b, {ModeId::LUp, ModeId::RDown});
    const PseudomodeEmbedding pm(b, rho0.rho, onres_params(), 3);
    CHECK(max_abs(pm.partial_trace(pm.embed(rho0.rho)) - rho0.rho) == 0.0);
    // Only the (1 up, 1 down) block is kept: 4 system states x 16 pseudomode states.
    CHECK(pm.extended_basis()->dim() == 64);
    CHECK(pm.top_level_population(pm.embed(rho0.rho)) == 0.0);
    CHECK(pm.hamiltonian().rows() == 64);
    CHECK_THROWS_AS(PseudomodeEmbedding(b, rho0.rho, onres_params(), 1), std::invalid_argument);
    CHECK_THROWS_AS(pm.embed(ket_state(b, {ModeId::LUp, ModeId::RUp}).rho), std::invalid_argument);
}

TEST_CASE("pseudomode positivity and truncation diagnostics") {
    const auto b = system_basis(2);
    const auto rho0 = ket_state(b, {ModeId::LUp, ModeId::RUp});
    const auto cfg = grid(2 * kPi);
    const auto tight = evolve_pseudomode(rho0, offres_params(), 5, cfg);
    CHECK(tight.diag.min_eigenvalue > -1e-7);
    CHECK(tight.diag.max_trace_drift < 1e-8);
    CHECK(tight.diag.max_top_level_population < 1e-3);
    ModelParams strong = offres_params();
    strong.g0 = 1.0;
    const auto loose = evolve_pseudomode(rho0, strong, 2, cfg);
    CHECK(loose.diag.max_top_level_population > 1e-4);
}

TEST_CASE("global bath leaves the two-particle dynamics unchanged") {
    const auto b = system_basis(2);
    const auto p = offres_params();
    for (auto modes : {std::vector<ModeId>{ModeId::LUp, ModeId::RUp}, std::vector<ModeId>{ModeId::LUp, ModeId::RDown}}) {
        const auto rho0 = DensityMatrix::pure(b, fock_ket(*b, modes));
        auto cfg = grid(4 * kPi, 0.01, 10, Method::Exponential);
        const auto global = evolve_global_bath(rho0, p, 0.5, cfg);
        const auto closed = evolve(spec(Dynamics::Closed, p), rho0, cfg);
        CHECK(max_trace_distance(global, closed) < 1e-10);
    }
    // The collective operator commutes with the Hamiltonian on the sector.
    const Operator S = build_sigma_z(b, Site::L) + build_sigma_z(b, Site::R);
    CHECK(max_abs(commutator(S, build_H_S(p, b) + build_H_D(p, b)).matrix()) < 1e-14);
}

TEST_CASE("steady-state detection") {
    const auto b = system_basis(2);
    const auto hom = ket_state(b, {ModeId::LUp, ModeId::RUp});
    SUBCASE("closed dynamics never settles") {
        const auto r = find_steady_state(spec(Dynamics::Closed, ModelParams{}), hom, 1e-7, 20.0, grid(20.0));
        CHECK_FALSE(r.converged);
    }
    SUBCASE("phenomenological dynamics settles to an unentangled state") {
        const auto r = find_steady_state(spec(Dynamics::Phenomenological, onres_params()), hom, 1e-7, 600.0, grid(600.0));
        CHECK(r.converged);
        CHECK(negativity(r.rho_ss) < 1e-6);
    }
    SUBCASE("microscopic dynamics settles with entanglement") {
        const auto r = find_steady_state(spec(Dynamics::Microscopic, onres_params()), hom, 1e-7, 400.0, grid(400.0));
        CHECK(r.converged);
        CHECK(r.residual < 1e-6);
        CHECK(r.t_reached < 150.0);
        CHECK(negativity(r.rho_ss) > 0.01);
    }
    SUBCASE("early exit pads the record grid with the converged state") {
        const auto tr = evolve(spec(Dynamics::Microscopic, onres_params()), hom, grid(300.0),
                               SteadyStateOptions{true, 1e-7, true});
        REQUIRE(tr.steady.has_value());
        CHECK(tr.states.size() == tr.times.size());
        CHECK(tr.integrated_points < tr.times.size());
        CHECK(max_abs(tr.states.back() - tr.states[tr.integrated_points - 1]) == 0.0);
        CHECK(tr.stats.stopped_early);
    }
}
