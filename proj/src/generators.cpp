// generators.cpp

#include "bosedeph/generators.hpp"

#include <cmath>
#include <stdexcept>

namespace bosedeph {

namespace {

constexpr cplx I{0.0, 1.0};

SparseMatrix to_sparse(const Matrix& m) { return m.sparseView(cplx(0.0), 1e-300); }

void check_baths(int n_baths) {
    if (n_baths != 1 && n_baths != 2) throw std::invalid_argument("n_baths must be 1 or 2");
}

// -i[H, rho] accumulated into out.
void add_commutator(const Matrix& H, const Matrix& rho, Matrix& out) {
    out.noalias() += -I * (H * rho);
    out.noalias() += I * (rho * H);
}

}  // namespace

Matrix dissipator(const Matrix& L, const Matrix& rho) {
    const Matrix LdL = L.adjoint() * L;
    return L * rho * L.adjoint() - 0.5 * (LdL * rho + rho * LdL);
}

LindbladGenerator::LindbladGenerator(const Matrix& H, const std::vector<JumpOperator>& jumps) {
    Matrix h_eff = H;
    for (const auto& j : jumps) {
        if (j.rate < 0) throw std::invalid_argument("jump rates must be >= 0");
        if (j.op.rows() != H.rows() || j.op.cols() != H.cols())
            throw std::invalid_argument("jump operator dimension differs from the Hamiltonian");
        if (j.rate == 0) continue;
        h_eff -= (0.5 * j.rate) * I * (j.op.adjoint() * j.op);
        jumps_.push_back(to_sparse(j.op));
        jumps_adj_.push_back(to_sparse(j.op.adjoint()));
        rates_.push_back(j.rate);
    }
    h_eff_ = to_sparse(h_eff);
}

void LindbladGenerator::apply(double, const Matrix& rho, Matrix& out) const {
    // -i(H_eff rho - rho H_eff†) + sum_k r_k L_k rho L_k†
    out.noalias() = -I * (h_eff_ * rho);
    work_.noalias() = h_eff_ * rho.adjoint();
    out.noalias() += I * work_.adjoint();
    for (std::size_t k = 0; k < jumps_.size(); ++k) {
        work_.noalias() = jumps_[k] * rho.adjoint();  // (rho L†)† = L rho†
        out.noalias() += rates_[k] * (jumps_[k] * work_.adjoint());
    }
}

CanonicalOperators CanonicalOperators::from(const OperatorSet& ops) {
    return CanonicalOperators{(ops.H_S + ops.H_D).matrix(), ops.H_D.matrix(), ops.A.matrix(), ops.B.matrix(),
                              ops.C.matrix(),   ops.sigma_z_L.matrix(),     ops.sigma_z_R.matrix()};
}

// ---- canonical, interaction picture ---------------------------------------

CanonicalGenerator::CanonicalGenerator(const ModelParams& p, CanonicalOperators ops, int n_baths)
    : p_(p), o_(std::move(ops)), n_baths_(n_baths) {
    p_.validate();
    check_baths(n_baths);
    BB_ = o_.B * o_.B;
    CC_ = o_.C * o_.C;
    BCs_ = o_.B * o_.C + o_.C * o_.B;
    const Matrix* F[2] = {&o_.B, &o_.C};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) FF_[i][j] = (*F[j]) * (*F[i]);
}

Matrix CanonicalGenerator::canonical_hamiltonian(double t) const {
    const auto h = damping_matrix(t, p_, n_baths_).H_can_coeffs;
    return h.h_D * o_.H_D + h.h_BB * BB_ + h.h_CC * CC_ + h.h_BC * BCs_;
}

void CanonicalGenerator::apply(double t, const Matrix& rho, Matrix& out) const {
    const auto dm = damping_matrix(t, p_, n_baths_);
    const auto& h = dm.H_can_coeffs;
    const Matrix H = h.h_D * o_.H_D + h.h_BB * BB_ + h.h_CC * CC_ + h.h_BC * BCs_;
    out.setZero(rho.rows(), rho.cols());
    add_commutator(H, rho, out);
    const Matrix* F[2] = {&o_.B, &o_.C};
    for (int i = 0; i < 2; ++i) {
        const Matrix Fr = (*F[i]) * rho;
        for (int j = 0; j < 2; ++j) {
            const cplx d = dm.D(i, j);
            if (d == cplx(0.0)) continue;
            out.noalias() += d * (Fr * (*F[j]));
            out.noalias() -= (0.5 * d) * (FF_[i][j] * rho);
            out.noalias() -= (0.5 * d) * (rho * FF_[i][j]);
        }
    }
}

// ---- canonical, Schrodinger picture ---------------------------------------

SchrodingerCanonicalGenerator::SchrodingerCanonicalGenerator(const ModelParams& p, CanonicalOperators ops,
                                                             int n_baths)
    : p_(p), o_(std::move(ops)), n_baths_(n_baths) {
    p_.validate();
    check_baths(n_baths);
}

void SchrodingerCanonicalGenerator::apply(double t, const Matrix& rho, Matrix& out) const {
    const auto dm = damping_matrix(t, p_, n_baths_);
    const auto& h = dm.H_can_coeffs;
    const double c = std::cos(p_.J * t), s = std::sin(p_.J * t);
    const Matrix Bt = c * o_.B - s * o_.C;
    const Matrix Ct = c * o_.C + s * o_.B;
    const Matrix H = o_.H_free + h.h_D * o_.H_D + h.h_BB * (Bt * Bt) + h.h_CC * (Ct * Ct) +
                     h.h_BC * (Bt * Ct + Ct * Bt);
    out.setZero(rho.rows(), rho.cols());
    add_commutator(H, rho, out);
    const Matrix* F[2] = {&Bt, &Ct};
    for (int i = 0; i < 2; ++i) {
        const Matrix Fr = (*F[i]) * rho;
        for (int j = 0; j < 2; ++j) {
            const cplx d = dm.D(i, j);
            if (d == cplx(0.0)) continue;
            const Matrix FjFi = (*F[j]) * (*F[i]);
            out.noalias() += d * (Fr * (*F[j]));
            out.noalias() -= (0.5 * d) * (FjFi * rho + rho * FjFi);
        }
    }
}

// ---- pre-canonical ---------------------------------------------------------

PrecanonicalGenerator::PrecanonicalGenerator(const ModelParams& p, CanonicalOperators ops, int n_baths)
    : p_(p), o_(std::move(ops)), n_baths_(n_baths) {
    p_.validate();
    check_baths(n_baths);
}

void PrecanonicalGenerator::apply(double t, const Matrix& rho, Matrix& out) const {
    const Eigen::Matrix2cd G = gamma_matrix(t, p_);
    const double f = p_.g0 * n_baths_;
    const Matrix* O[2] = {&o_.B, &o_.C};
    out.setZero(rho.rows(), rho.cols());
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const Matrix& Oi = *O[i];
            const Matrix& Oj = *O[j];
            const Matrix OiRhoOj = Oi * rho * Oj;
            const Matrix OjRhoOi = Oj * rho * Oi;
            const Matrix OjOiRho = Oj * Oi * rho;
            const Matrix RhoOiOj = rho * Oi * Oj;
            const double re = G(i, j).real(), im = G(i, j).imag();
            out += (f * re) * (OiRhoOj + OjRhoOi - OjOiRho - RhoOiOj);
            out += (f * im) * I * (OiRhoOj - OjRhoOi - OjOiRho + RhoOiOj);
        }
    }
}

// ---- second-order TCL, double-commutator form ------------------------------

Tcl2Generator::Tcl2Generator(const ModelParams& p, CanonicalOperators ops, bool include_A, int n_baths)
    : p_(p), o_(std::move(ops)), include_A_(include_A), n_baths_(n_baths) {
    p_.validate();
    check_baths(n_baths);
}

void Tcl2Generator::apply(double t, const Matrix& rho, Matrix& out) const {
    const auto cs = coefficients(t, p_);
    const double c = std::cos(p_.J * t), s = std::sin(p_.J * t);
    const double a = include_A_ ? 1.0 : 0.0;
    out.setZero(rho.rows(), rho.cols());
    for (int x = 0; x < n_baths_; ++x) {
        const double sign = x == 0 ? 1.0 : -1.0;  // L, then R
        const Matrix S = a * o_.A + sign * (c * o_.B + s * o_.C);
        const Matrix Lam = p_.g0 * (a * cs.alpha * o_.A + sign * (cs.beta * o_.B + cs.kappa * o_.C));
        const Matrix X = Lam * rho - rho * Lam.adjoint();
        out -= S * X - X * S;
    }
}

// ---- short-time limit ------------------------------------------------------

ShortTimeGenerator::ShortTimeGenerator(const ModelParams& p, CanonicalOperators ops, int n_baths)
    : p_(p), o_(std::move(ops)), n_baths_(n_baths) {
    p_.validate();
    check_baths(n_baths);
}

void ShortTimeGenerator::apply(double t, const Matrix& rho, Matrix& out) const {
    const cplx g = p_.g0 * gamma_short_time(t, p_);
    out.setZero(rho.rows(), rho.cols());
    const Matrix* S[2] = {&o_.sigma_z_L, &o_.sigma_z_R};
    for (int x = 0; x < n_baths_; ++x) {
        const Matrix& s = *S[x];
        const Matrix X = g * (s * rho) - std::conj(g) * (rho * s);
        out -= s * X - X * s;
    }
}

}  // namespace bosedeph
