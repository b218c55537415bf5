// solvers.cpp

#include "bosedeph/solvers.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "bosedeph/linalg.hpp"

namespace bosedeph {

namespace {

constexpr cplx I{0.0, 1.0};

Matrix commutator_action(const Matrix& H, const Matrix& rho) { return -I * (H * rho - rho * H); }

void require_system_basis(const BasisPtr& b) {
    const std::vector<ModeId> sys(std::begin(kSystemModes), std::end(kSystemModes));
    if (!b || b->modes() != sys) throw BasisError("solver needs a basis of exactly the four system modes");
}

// Collects record points, diagnostics and steady-state detection.
class Recorder {
public:
    Recorder(Trajectory& tr, const IntegratorConfig& cfg, const SteadyStateOptions& ss)
        : tr_(tr), ss_(ss) {
        tr_.times = cfg.record_grid();
        tr_.states.reserve(tr_.times.size());
    }

    bool record(double t, Matrix rho_out, const Matrix& rho_schrodinger, double residual) {
        auto& d = tr_.diag;
        d.max_trace_drift = std::max(d.max_trace_drift, std::abs(rho_out.trace() - 1.0));
        d.max_hermiticity_error = std::max(d.max_hermiticity_error, max_abs(rho_out - rho_out.adjoint()));
        const double e = linalg::min_eigenvalue(rho_out);
        if (tr_.states.empty() || e < d.min_eigenvalue) {
            d.min_eigenvalue = e;
            d.t_min_eigenvalue = t;
        }
        tr_.states.push_back(std::move(rho_out));
        ++tr_.integrated_points;
        if (!ss_.enabled) return true;

        tr_.residuals.push_back(residual);
        const bool below = residual < ss_.threshold;
        tr_.steady = SteadyStateReport{below, t, residual, DensityMatrix(tr_.basis, rho_schrodinger)};
        return !(below && ss_.early_exit);
    }

    void finish(const IntegrationStats& st) {
        tr_.stats = st;
        if (tr_.states.empty()) throw NumericalError("integration produced no record points");
        while (tr_.states.size() < tr_.times.size()) tr_.states.push_back(tr_.states.back());
    }

private:
    Trajectory& tr_;
    SteadyStateOptions ss_;
};

Trajectory make_trajectory(Dynamics kind, const BasisPtr& basis) {
    Trajectory tr;
    tr.kind = kind;
    tr.basis = basis;
    return tr;
}

std::vector<JumpOperator> phenomenological_jumps(const BasisPtr& b, const PhenomenologicalRates& r) {
    for (double x : {r.L_up, r.L_down, r.R_up, r.R_down}) {
        if (!(x >= 0) || !std::isfinite(x)) throw std::invalid_argument("phenomenological rates must be >= 0");
    }
    return {{number(b, ModeId::LUp).matrix(), r.L_up},
            {number(b, ModeId::LDown).matrix(), r.L_down},
            {number(b, ModeId::RUp).matrix(), r.R_up},
            {number(b, ModeId::RDown).matrix(), r.R_down}};
}

Trajectory run_lindblad(Dynamics kind, const LindbladGenerator& L, const DensityMatrix& rho0,
                        const IntegratorConfig& cfg, const SteadyStateOptions& ss) {
    auto tr = make_trajectory(kind, rho0.basis);
    Recorder rec(tr, cfg, ss);
    Matrix work(rho0.rho.rows(), rho0.rho.cols());
    const auto st = integrate([&](double t, const Matrix& y, Matrix& dy) { L.apply(t, y, dy); }, rho0.rho, cfg,
                              [&](std::size_t, double t, const Matrix& y) {
                                  double res = 0.0;
                                  if (ss.enabled) {
                                      L.apply(t, y, work);
                                      res = max_abs(work);
                                  }
                                  return rec.record(t, y, y, res);
                              },
                              true);
    rec.finish(st);
    return tr;
}

Trajectory run_closed(const ModelParams& p, const DensityMatrix& rho0, const IntegratorConfig& cfg,
                      const SteadyStateOptions& ss) {
    cfg.validate();
    const Matrix H = (build_H_S(p, rho0.basis) + build_H_D(p, rho0.basis)).matrix();
    const FreePropagator U(H);
    auto tr = make_trajectory(Dynamics::Closed, rho0.basis);
    Recorder rec(tr, cfg, ss);
    IntegrationStats st;
    const auto n = cfg.record_count();
    for (std::size_t k = 0; k < n; ++k) {
        const double t = cfg.record_time(k);
        Matrix rho = U.to_schrodinger(rho0.rho, t);
        const double res = ss.enabled ? max_abs(commutator_action(H, rho)) : 0.0;
        if (!rec.record(t, rho, rho, res)) {
            st.stopped_early = k + 1 < n;
            break;
        }
    }
    rec.finish(st);
    return tr;
}

Trajectory run_microscopic(const DynamicsSpec& spec, const DensityMatrix& rho0, const IntegratorConfig& cfg,
                           const SteadyStateOptions& ss) {
    const auto ops = CanonicalOperators::from(build_operator_set(spec.params, rho0.basis));
    const CanonicalGenerator gen(spec.params, ops, spec.n_baths);
    const SchrodingerCanonicalGenerator sgen(spec.params, ops, spec.n_baths);
    const FreePropagator U(ops.H_free);
    auto tr = make_trajectory(Dynamics::Microscopic, rho0.basis);
    Recorder rec(tr, cfg, ss);
    Matrix work(rho0.rho.rows(), rho0.rho.cols());
    // The interaction picture coincides with the Schrodinger picture at t = 0.
    const auto st = integrate([&](double t, const Matrix& y, Matrix& dy) { gen.apply(t, y, dy); }, rho0.rho, cfg,
                              [&](std::size_t, double t, const Matrix& y) {
                                  Matrix rs = U.to_schrodinger(y, t);
                                  double res = 0.0;
                                  if (ss.enabled) {
                                      sgen.apply(t, rs, work);
                                      res = max_abs(work);
                                  }
                                  Matrix out = spec.frame == Frame::Schrodinger ? rs : y;
                                  return rec.record(t, std::move(out), rs, res);
                              });
    rec.finish(st);
    return tr;
}

Trajectory run_pseudomode(const DynamicsSpec& spec, const DensityMatrix& rho0, const IntegratorConfig& cfg,
                          const SteadyStateOptions& ss) {
    const PseudomodeEmbedding emb(rho0.basis, rho0.rho, spec.params, spec.n_max, spec.pm_damping_factor);
    const auto& L = emb.generator();
    auto tr = make_trajectory(Dynamics::Pseudomode, rho0.basis);
    Recorder rec(tr, cfg, ss);
    const Matrix ext0 = emb.embed(rho0.rho);
    Matrix work(ext0.rows(), ext0.cols());
    const auto st = integrate([&](double t, const Matrix& y, Matrix& dy) { L.apply(t, y, dy); }, ext0, cfg,
                              [&](std::size_t, double t, const Matrix& y) {
                                  tr.diag.max_top_level_population =
                                      std::max(tr.diag.max_top_level_population, emb.top_level_population(y));
                                  double res = 0.0;
                                  if (ss.enabled) {
                                      L.apply(t, y, work);
                                      res = max_abs(work);
                                  }
                                  Matrix rs = emb.partial_trace(y);
                                  return rec.record(t, rs, rs, res);
                              },
                              true);
    rec.finish(st);
    return tr;
}

}  // namespace

// ---- DensityMatrix ----------------------------------------------------------

DensityMatrix::DensityMatrix(BasisPtr b, Matrix m) : basis(std::move(b)), rho(std::move(m)) {
    if (!basis) throw BasisError("density matrix without basis");
    if (rho.rows() != static_cast<Eigen::Index>(basis->dim()) || rho.cols() != rho.rows())
        throw BasisError("density matrix dimension differs from basis dimension");
}

DensityMatrix DensityMatrix::pure(BasisPtr b, const Vector& psi) {
    const double n = psi.norm();
    if (!(n > 0)) throw std::invalid_argument("zero state vector");
    const Vector v = psi / n;
    return DensityMatrix(std::move(b), v * v.adjoint());
}

double DensityMatrix::trace_error() const { return std::abs(rho.trace() - 1.0); }
double DensityMatrix::hermiticity_error() const { return max_abs(rho - rho.adjoint()); }
double DensityMatrix::min_eigenvalue() const { return linalg::min_eigenvalue(rho); }

void DensityMatrix::validate(double trace_tol, double herm_tol, double eig_tol) const {
    std::vector<std::string> v;
    if (trace_error() > trace_tol) v.push_back("trace differs from 1");
    if (hermiticity_error() > herm_tol) v.push_back("not Hermitian");
    if (min_eigenvalue() < -eig_tol) v.push_back("negative eigenvalue");
    if (v.empty()) return;
    std::ostringstream os;
    os << "invalid density matrix:";
    for (const auto& s : v) os << " " << s << ";";
    throw std::invalid_argument(os.str());
}

// ---- names ------------------------------------------------------------------

std::string dynamics_name(Dynamics d) {
    switch (d) {
        case Dynamics::Closed: return "closed";
        case Dynamics::Phenomenological: return "phenomenological";
        case Dynamics::Microscopic: return "microscopic";
        case Dynamics::Pseudomode: return "pseudomode";
        case Dynamics::Global: return "global";
    }
    return "?";
}

Dynamics parse_dynamics(const std::string& s) {
    for (auto d : {Dynamics::Closed, Dynamics::Phenomenological, Dynamics::Microscopic, Dynamics::Pseudomode,
                   Dynamics::Global}) {
        if (dynamics_name(d) == s) return d;
    }
    throw std::invalid_argument("unknown dynamics '" + s +
                                "' (expected closed, phenomenological, microscopic, pseudomode or global)");
}

double default_phenomenological_rate(const ModelParams& p) {
    p.validate();
    return 2.0 * p.g0 * p.lambda / (p.lambda * p.lambda + p.omega_0 * p.omega_0);
}

// ---- FreePropagator -----------------------------------------------------------

FreePropagator::FreePropagator(const Matrix& H) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(linalg::hermitian_part(H));
    V_ = es.eigenvectors();
    e_ = es.eigenvalues();
}

Matrix FreePropagator::at(double t) const {
    const Vector ph = (e_.cast<cplx>() * cplx(0.0, -t)).array().exp().matrix();
    return V_ * ph.asDiagonal() * V_.adjoint();
}

Matrix FreePropagator::to_schrodinger(const Matrix& rho_interaction, double t) const {
    const Matrix U = at(t);
    return U * rho_interaction * U.adjoint();
}

Matrix FreePropagator::to_interaction(const Matrix& rho_schrodinger, double t) const {
    const Matrix U = at(t);
    return U.adjoint() * rho_schrodinger * U;
}

// ---- PseudomodeEmbedding -----------------------------------------------------

PseudomodeEmbedding::PseudomodeEmbedding(const BasisPtr& system, const Matrix& rho0_sys, const ModelParams& p,
                                         int n_max, double damping_factor)
    : sys_(system), n_max_(n_max) {
    require_system_basis(system);
    p.validate();
    if (n_max < 2) throw std::invalid_argument("pseudomode n_max must be >= 2");
    if (!(damping_factor > 0)) throw std::invalid_argument("pseudomode damping factor must be > 0");
    const auto d = static_cast<Eigen::Index>(system->dim());
    if (rho0_sys.rows() != d || rho0_sys.cols() != d) throw BasisError("initial state dimension mismatch");

    const auto spin_label = [&](std::size_t i) {
        const auto& s = system->state(i);
        return std::pair{s[0] + s[2], s[1] + s[3]};  // (N_up, N_down)
    };
    std::set<std::pair<int, int>> blocks;
    for (Eigen::Index i = 0; i < d; ++i) {
        if (rho0_sys.row(i).cwiseAbs().maxCoeff() > 0.0) blocks.insert(spin_label(static_cast<std::size_t>(i)));
    }
    if (blocks.empty()) throw std::invalid_argument("initial state is zero");

    std::vector<Occupation> states;
    for (std::size_t i = 0; i < system->dim(); ++i) {
        if (!blocks.count(spin_label(i))) continue;
        for (int a = 0; a <= n_max; ++a) {
            for (int b = 0; b <= n_max; ++b) {
                Occupation o = system->state(i);
                o.push_back(a);
                o.push_back(b);
                states.push_back(std::move(o));
            }
        }
    }
    std::vector<ModeId> modes(std::begin(kSystemModes), std::end(kSystemModes));
    modes.push_back(ModeId::PmL);
    modes.push_back(ModeId::PmR);
    std::vector<int> caps = system->caps();
    caps.push_back(n_max);
    caps.push_back(n_max);
    ext_ = std::make_shared<const FockBasis>(FockBasis::from_states(modes, caps, std::move(states)));

    for (const auto& o : ext_->states()) {
        const Occupation s(o.begin(), o.begin() + 4);
        sys_index_.push_back(*system->index_of(s));
        pm_index_.push_back(o[4] * (n_max + 1) + o[5]);
        top_.push_back(o[4] == n_max || o[5] == n_max);
    }

    H_ = build_H_pm(p, std::sqrt(p.g0), p.omega_0, ext_).matrix();
    std::vector<JumpOperator> jumps;
    for (ModeId m : kPseudoModes) jumps.push_back({ladder_string(ext_, {{m, Ladder::Annihilate}}).matrix(),
                         damping_factor * p.lambda});
    gen_ = std::make_unique<LindbladGenerator>(H_, jumps);
}

Matrix PseudomodeEmbedding::embed(const Matrix& rho_sys) const {
    const auto n = static_cast<Eigen::Index>(ext_->dim());
    Matrix r = Matrix::Zero(n, n);
    double kept = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (pm_index_[i] != 0) continue;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (pm_index_[j] != 0) continue;
            r(i, j) = rho_sys(static_cast<Eigen::Index>(sys_index_[i]), static_cast<Eigen::Index>(sys_index_[j]));
        }
        kept += std::abs(r(i, i));
    }
    if (std::abs(kept - std::abs(rho_sys.trace())) > 1e-12)
        throw std::invalid_argument("state has support outside the embedded symmetry blocks");
    return r;
}

Matrix PseudomodeEmbedding::partial_trace(const Matrix& rho_ext) const {
    const auto d = static_cast<Eigen::Index>(sys_->dim());
    Matrix r = Matrix::Zero(d, d);
    const auto n = static_cast<Eigen::Index>(ext_->dim());
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (pm_index_[i] != pm_index_[j]) continue;
            r(static_cast<Eigen::Index>(sys_index_[i]), static_cast<Eigen::Index>(sys_index_[j])) += rho_ext(i, j);
        }
    }
    return r;
}

double PseudomodeEmbedding::top_level_population(const Matrix& rho_ext) const {
    double p = 0.0;
    for (Eigen::Index i = 0; i < rho_ext.rows(); ++i) {
        if (top_[i]) p += rho_ext(i, i).real();
    }
    return p;
}

// ---- solvers -----------------------------------------------------------------

std::vector<Vector> evolve_closed(const Operator& H, const Vector& psi0, const std::vector<double>& times) {
    if (H.hermiticity_error() > 1e-12) throw std::invalid_argument("evolve_closed needs a Hermitian Hamiltonian");
    if (psi0.size() != static_cast<Eigen::Index>(H.dim())) throw BasisError("state dimension mismatch");
    if (std::abs(psi0.norm() - 1.0) > 1e-10) throw std::invalid_argument("initial state is not normalized");
    const FreePropagator U(H.matrix());
    std::vector<Vector> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(U.at(t) * psi0);
    return out;
}

Trajectory evolve_generator(const Generator& L, const DensityMatrix& rho0, const IntegratorConfig& cfg) {
    auto tr = make_trajectory(Dynamics::Closed, rho0.basis);
    Recorder rec(tr, cfg, {});
    const auto st = integrate([&](double t, const Matrix& y, Matrix& dy) { L.apply(t, y, dy); }, rho0.rho, cfg,
                              [&](std::size_t, double t, const Matrix& y) { return rec.record(t, y, y, 0.0); },
                              L.autonomous());
    rec.finish(st);
    return tr;
}

Trajectory evolve(const DynamicsSpec& spec, const DensityMatrix& rho0, const IntegratorConfig& cfg,
                  const SteadyStateOptions& ss) {
    require_system_basis(rho0.basis);
    spec.params.validate();
    rho0.validate();
    const auto& b = rho0.basis;
    switch (spec.kind) {
        case Dynamics::Closed: return run_closed(spec.params, rho0, cfg, ss);
        case Dynamics::Phenomenological: {
            const auto rates =
                spec.rates.value_or(PhenomenologicalRates::uniform(default_phenomenological_rate(spec.params)));
            const Matrix H = (build_H_S(spec.params, b) + build_H_D(spec.params, b)).matrix();
            const LindbladGenerator L(H, phenomenological_jumps(b, rates));
            return run_lindblad(Dynamics::Phenomenological, L, rho0, cfg, ss);
        }
        case Dynamics::Microscopic: return run_microscopic(spec, rho0, cfg, ss);
        case Dynamics::Pseudomode: return run_pseudomode(spec, rho0, cfg, ss);
        case Dynamics::Global: {
            if (!(spec.global_gamma >= 0)) throw std::invalid_argument("global gamma must be >= 0");
            const Matrix H = (build_H_S(spec.params, b) + build_H_D(spec.params, b)).matrix();
            const Matrix S = (build_sigma_z(b, Site::L) + build_sigma_z(b, Site::R)).matrix();
            const LindbladGenerator L(H, {{S, spec.global_gamma}});
            return run_lindblad(Dynamics::Global, L, rho0, cfg, ss);
        }
    }
    throw std::invalid_argument("unknown dynamics");
}

Trajectory evolve_phenomenological(const DensityMatrix& rho0, const ModelParams& p, const PhenomenologicalRates& r,
                                   const IntegratorConfig& cfg) {
    DynamicsSpec s;
    s.kind = Dynamics::Phenomenological;
    s.params = p;
    s.rates = r;
    return evolve(s, rho0, cfg);
}

Trajectory evolve_microscopic(const DensityMatrix& rho0, const ModelParams& p, const IntegratorConfig& cfg,
                              Frame frame) {
    DynamicsSpec s;
    s.kind = Dynamics::Microscopic;
    s.params = p;
    s.frame = frame;
    return evolve(s, rho0, cfg);
}

Trajectory evolve_pseudomode(const DensityMatrix& rho0, const ModelParams& p, int n_max,
                             const IntegratorConfig& cfg) {
    DynamicsSpec s;
    s.kind = Dynamics::Pseudomode;
    s.params = p;
    s.n_max = n_max;
    return evolve(s, rho0, cfg);
}

Trajectory evolve_global_bath(const DensityMatrix& rho0, const ModelParams& p, double gamma,
                              const IntegratorConfig& cfg) {
    DynamicsSpec s;
    s.kind = Dynamics::Global;
    s.params = p;
    s.global_gamma = gamma;
    return evolve(s, rho0, cfg);
}

SteadyStateReport find_steady_state(const DynamicsSpec& spec, const DensityMatrix& rho0, double threshold,
                                    double t_max, IntegratorConfig cfg) {
    if (!(threshold > 0)) throw std::invalid_argument("steady-state threshold must be > 0");
    cfg.t_end = t_max;
    const auto tr = evolve(spec, rho0, cfg, SteadyStateOptions{true, threshold, true});
    return *tr.steady;
}

}  // namespace bosedeph
