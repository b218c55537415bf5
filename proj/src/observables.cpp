// observables.cpp

#include "bosedeph/observables.hpp"

#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Eigenvalues>

#include "bosedeph/linalg.hpp"

namespace bosedeph {

namespace {

// Index of |L sigma, R tau> in the two-qubit basis, or -1.
int qubit_index(const Occupation& s) {
    const int lu = s[0], ld = s[1], ru = s[2], rd = s[3];
    if (lu + ld != 1 || ru + rd != 1) return -1;
    return 2 * (lu ? 0 : 1) + (ru ? 0 : 1);
}

double eigen_sqrt_sum(const Matrix& m) {
    return linalg::clip_roundoff(linalg::hermitian_eigenvalues(m)).cwiseSqrt().sum();
}

}  // namespace

double coincidence_probability(const DensityMatrix& rho) {
    double p = 0.0;
    for (std::size_t i = 0; i < rho.basis->dim(); ++i) {
        if (qubit_index(rho.basis->state(i)) >= 0) p += rho.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
    }
    return p;
}

SloccResult slocc_project(const DensityMatrix& rho, double eps) {
    SloccResult r;
    r.state.rho4.setZero();
    const auto n = rho.basis->dim();
    for (std::size_t i = 0; i < n; ++i) {
        const int qi = qubit_index(rho.basis->state(i));
        if (qi < 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            const int qj = qubit_index(rho.basis->state(j));
            if (qj < 0) continue;
            r.state.rho4(qi, qj) = rho.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    r.success_prob = r.state.rho4.trace().real();
    if (!(r.success_prob >= eps))
        throw PostSelectionError("post-selection impossible: one-per-site probability " +
                                 std::to_string(r.success_prob) + " below threshold");
    r.state.rho4 /= r.success_prob;
    return r;
}

double concurrence(const TwoQubitState& s) {
    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    // sigma_y ⊗ sigma_y in {↑↑, ↑↓, ↓↑, ↓↓}
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    const Matrix rho = s.rho4;
    const Matrix tilde = yy * s.rho4.conjugate() * yy;
    const Matrix sr = linalg::psd_sqrt(rho);
    Eigen::VectorXd l = linalg::clip_roundoff(linalg::hermitian_eigenvalues(sr * tilde * sr)).cwiseSqrt();
    std::sort(l.data(), l.data() + l.size(), std::greater<>());
    return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

NegativityValue negativity_detailed(const DensityMatrix& rho) {
    // Local occupation states (n_up, n_down) per site, in order of first appearance.
    std::map<std::pair<int, int>, int> left, right;
    const auto n = rho.basis->dim();
    std::vector<std::pair<int, int>> idx(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& s = rho.basis->state(i);
        auto l = left.try_emplace({s[0], s[1]}, static_cast<int>(left.size())).first->second;
        auto r = right.try_emplace({s[2], s[3]}, static_cast<int>(right.size())).first->second;
        idx[i] = {l, r};
    }
    const auto dl = static_cast<Eigen::Index>(left.size()), dr = static_cast<Eigen::Index>(right.size());
    Matrix pt = Matrix::Zero(dl * dr, dl * dr);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto [a, b] = idx[i];
            const auto [ap, bp] = idx[j];
            // <a b| rho |a' b'>  ->  <a' b| rho^{T_L} |a b'>
            pt(ap * dr + b, a * dr + bp) = rho.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    const double raw = 0.5 * (linalg::hermitian_trace_norm(pt) - std::abs(rho.rho.trace()));
    return {std::max(0.0, raw), raw};
}

double negativity(const DensityMatrix& rho) { return negativity_detailed(rho).value; }

double first_order_correlation(const DensityMatrix& rho, Spin s) {
    const ModeId l = s == Spin::Up ? ModeId::LUp : ModeId::LDown;
    const ModeId r = s == Spin::Up ? ModeId::RUp : ModeId::RDown;
    const Matrix op = (hop(rho.basis, r, l) + hop(rho.basis, l, r)).matrix();
    return (rho.rho * op).trace().real();
}

double fidelity(const Matrix& rho, const Matrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw std::invalid_argument("fidelity of matrices with different dimensions");
    const Matrix sr = linalg::psd_sqrt(rho);
    const double f = eigen_sqrt_sum(sr * sigma * sr);
    return f * f;
}

double trace_distance(const Matrix& rho, const Matrix& sigma) {
    if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
        throw std::invalid_argument("trace distance of matrices with different dimensions");
    return 0.5 * linalg::hermitian_trace_norm(rho - sigma);
}

std::vector<cplx> coherences(const DensityMatrix& rho, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    std::vector<cplx> out;
    out.reserve(pairs.size());
    for (auto [i, j] : pairs) {
        if (i >= rho.basis->dim() || j >= rho.basis->dim()) throw std::out_of_range("coherence index outside basis");
        out.push_back(rho.rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    return out;
}

Eigen::Vector4cd bell_psi_plus() { return Eigen::Vector4cd(0, 1, 1, 0) / std::sqrt(2.0); }
Eigen::Vector4cd bell_psi_minus() { return Eigen::Vector4cd(0, 1, -1, 0) / std::sqrt(2.0); }

double fidelity_with_pure(const TwoQubitState& s, const Eigen::Vector4cd& psi) {
    return (psi.adjoint() * s.rho4 * psi)(0, 0).real();
}

ObservableRecord evaluate_observables(const DensityMatrix& rho, double t,
                                      const std::vector<std::pair<std::size_t, std::size_t>>& coherence_pairs,
                                      Spin c1_spin) {
    ObservableRecord r;
    r.t = t;
    r.P11 = coincidence_probability(rho);
    r.C1 = first_order_correlation(rho, c1_spin);
    const auto nv = negativity_detailed(rho);
    r.negativity = nv.value;
    r.negativity_raw = nv.raw;
    r.coherences = coherences(rho, coherence_pairs);
    try {
        const auto s = slocc_project(rho);
        r.slocc_success_prob = s.success_prob;
        r.concurrence = concurrence(s.state);
        r.fidelity_psi_plus = fidelity_with_pure(s.state, bell_psi_plus());
        r.fidelity_psi_minus = fidelity_with_pure(s.state, bell_psi_minus());
    } catch (const PostSelectionError&) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r.slocc_success_prob = r.P11;
        r.concurrence = r.fidelity_psi_plus = r.fidelity_psi_minus = nan;
    }
    return r;
}

}  // namespace bosedeph
