// fock.cpp — Fock basis enumeration and ladder-operator construction

#include "bosedeph/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace bosedeph {

std::string_view mode_name(ModeId m) {
    switch (m) {
        case ModeId::LUp: return "L_up";
        case ModeId::LDown: return "L_down";
        case ModeId::RUp: return "R_up";
        case ModeId::RDown: return "R_down";
        case ModeId::PmL: return "PM_L";
        case ModeId::PmR: return "PM_R";
    }
    return "?";
}

ModeId parse_mode(std::string_view name) {
    for (int i = 0; i < 6; ++i) {
        const auto m = static_cast<ModeId>(i);
        if (mode_name(m) == name) return m;
    }
    throw BasisError("unknown mode '" + std::string(name) + "'");
}

bool is_system_mode(ModeId m) { return static_cast<int>(m) < 4; }

FockBasis::FockBasis(std::vector<ModeId> modes, std::vector<int> caps,
                     std::vector<SectorConstraint> constraints)
    : modes_(std::move(modes)), caps_(std::move(caps)), constraints_(std::move(constraints)) {
    if (modes_.empty()) throw BasisError("empty mode list");
    if (caps_.size() != modes_.size()) throw BasisError("one occupation cap per mode required");
    for (std::size_t i = 1; i < modes_.size(); ++i) {
        if (static_cast<int>(modes_[i]) <= static_cast<int>(modes_[i - 1]))
            throw BasisError("modes must be distinct and in canonical order");
    }
    for (int c : caps_) {
        if (c < 1) throw BasisError("occupation cap must be >= 1");
    }

    // Each constraint as a list of slots.
    std::vector<std::vector<std::size_t>> cslots;
    for (const auto& c : constraints_) {
        std::vector<std::size_t> s;
        int reach = 0;
        for (ModeId m : c.modes) {
            if (!has_mode(m)) throw BasisError("constraint on a mode not in the basis");
            s.push_back(slot(m));
            reach += caps_[slot(m)];
        }
        if (c.total < 0 || c.total > reach)
            throw BasisError("empty basis: sector " + std::to_string(c.total) +
                             " exceeds reachable occupation " + std::to_string(reach));
        cslots.push_back(std::move(s));
    }

    Occupation occ(modes_.size(), 0);
    const auto satisfied = [&](bool final) {
        for (std::size_t k = 0; k < constraints_.size(); ++k) {
            int sum = 0;
            for (auto s : cslots[k]) sum += occ[s];
            if (sum > constraints_[k].total) return false;
            if (final && sum != constraints_[k].total) return false;
        }
        return true;
    };
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
        if (pos == modes_.size()) {
            if (satisfied(true)) states_.push_back(occ);
            return;
        }
        for (int n = 0; n <= caps_[pos]; ++n) {
            occ[pos] = n;
            if (satisfied(false)) rec(pos + 1);
        }
        occ[pos] = 0;
    };
    rec(0);
    if (states_.empty()) throw BasisError("empty basis: no occupation vector satisfies the constraints");
    build_index();
}

FockBasis FockBasis::from_states(std::vector<ModeId> modes, std::vector<int> caps,
                                 std::vector<Occupation> states) {
    FockBasis b;
    b.modes_ = std::move(modes);
    b.caps_ = std::move(caps);
    if (b.modes_.empty()) throw BasisError("empty mode list");
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    for (const auto& s : states) {
        if (s.size() != b.modes_.size()) throw BasisError("occupation vector length mismatch");
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] < 0 || s[i] > b.caps_[i]) throw BasisError("occupation outside cap");
        }
    }
    if (states.empty()) throw BasisError("empty basis");
    b.states_ = std::move(states);
    b.build_index();
    return b;
}

void FockBasis::build_index() {
    index_.clear();
    for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], i);
}

std::optional<std::size_t> FockBasis::index_of(const Occupation& occ) const {
    auto it = index_.find(occ);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool FockBasis::has_mode(ModeId m) const {
    return std::find(modes_.begin(), modes_.end(), m) != modes_.end();
}

std::size_t FockBasis::slot(ModeId m) const {
    auto it = std::find(modes_.begin(), modes_.end(), m);
    if (it == modes_.end()) throw BasisError("unknown mode " + std::string(mode_name(m)));
    return static_cast<std::size_t>(it - modes_.begin());
}

FockBasis FockBasis::enlarged() const { return FockBasis(modes_, caps_, {}); }

FockBasis FockBasis::filtered(const std::function<bool(const Occupation&)>& keep) const {
    std::vector<Occupation> kept;
    std::copy_if(states_.begin(), states_.end(), std::back_inserter(kept), keep);
    auto b = from_states(modes_, caps_, std::move(kept));
    b.constraints_ = constraints_;
    return b;
}

bool FockBasis::same_as(const FockBasis& other) const {
    return this == &other || (modes_ == other.modes_ && states_ == other.states_);
}

std::string FockBasis::describe() const {
    std::ostringstream os;
    os << "FockBasis(";
    for (std::size_t i = 0; i < modes_.size(); ++i) os << (i ? "," : "") << mode_name(modes_[i]);
    os << "; dim=" << dim() << ")";
    return os.str();
}

BasisPtr enumerate_basis(const std::vector<ModeId>& modes, int max_occupation, std::optional<int> sector) {
    if (modes.empty()) throw BasisError("empty mode list");
    std::vector<ModeId> sorted = modes;
    std::sort(sorted.begin(), sorted.end());
    std::vector<SectorConstraint> constraints;
    if (sector) {
        SectorConstraint c;
        for (ModeId m : sorted) {
            if (is_system_mode(m)) c.modes.push_back(m);
        }
        if (c.modes.empty()) c.modes = sorted;
        c.total = *sector;
        constraints.push_back(std::move(c));
    }
    return std::make_shared<const FockBasis>(sorted, std::vector<int>(sorted.size(), max_occupation),
                                             std::move(constraints));
}

BasisPtr system_basis(int particles) {
    return enumerate_basis({std::begin(kSystemModes), std::end(kSystemModes)}, std::max(particles, 1), particles);
}

// ---------------------------------------------------------------------------

Operator::Operator(BasisPtr basis, Matrix m) : basis_(std::move(basis)), m_(std::move(m)) {
    if (!basis_) throw BasisError("operator without basis");
    if (static_cast<std::size_t>(m_.rows()) != basis_->dim() || m_.rows() != m_.cols())
        throw BasisError("operator matrix dimension does not match basis dimension");
}

Operator Operator::zero(BasisPtr basis) {
    const auto n = static_cast<Eigen::Index>(basis->dim());
    return Operator(std::move(basis), Matrix::Zero(n, n));
}

Operator Operator::identity(BasisPtr basis) {
    const auto n = static_cast<Eigen::Index>(basis->dim());
    return Operator(std::move(basis), Matrix::Identity(n, n));
}

void Operator::check_same_basis(const Operator& o) const {
    if (!basis_->same_as(*o.basis_)) throw BasisError("basis mismatch between operators");
}

Operator Operator::adjoint() const { return Operator(basis_, m_.adjoint()); }

double Operator::hermiticity_error() const { return max_abs(m_ - m_.adjoint()); }

Operator Operator::operator+(const Operator& o) const {
    check_same_basis(o);
    return Operator(basis_, m_ + o.m_);
}

Operator Operator::operator-(const Operator& o) const {
    check_same_basis(o);
    return Operator(basis_, m_ - o.m_);
}

Operator Operator::operator*(const Operator& o) const {
    check_same_basis(o);
    return Operator(basis_, m_ * o.m_);
}

Operator Operator::operator*(cplx s) const { return Operator(basis_, m_ * s); }
Operator Operator::operator-() const { return Operator(basis_, -m_); }

Vector Operator::apply(const Vector& v) const {
    if (static_cast<std::size_t>(v.size()) != dim()) throw BasisError("state dimension mismatch");
    return m_ * v;
}

Operator compose(const Operator& a, const Operator& b) { return a * b; }
Operator add(const Operator& a, const Operator& b) { return a + b; }
Operator scale(const Operator& a, cplx s) { return a * s; }
Operator adjoint(const Operator& a) { return a.adjoint(); }
Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }
Operator anticommutator(const Operator& a, const Operator& b) { return a * b + b * a; }

Operator ladder_string(const BasisPtr& basis, const std::vector<std::pair<ModeId, Ladder>>& factors) {
    const auto n = basis->dim();
    std::vector<std::size_t> slots;
    for (const auto& f : factors) slots.push_back(basis->slot(f.first));
    const auto& caps = basis->caps();

    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t col = 0; col < n; ++col) {
        Occupation occ = basis->state(col);
        double amp = 1.0;
        for (std::size_t k = factors.size(); k-- > 0 && amp != 0.0;) {
            int& o = occ[slots[k]];
            if (factors[k].second == Ladder::Create) {
                if (o + 1 > caps[slots[k]]) {
                    amp = 0.0;
                } else {
                    amp *= std::sqrt(static_cast<double>(o + 1));
                    ++o;
                }
            } else {
                if (o == 0) {
                    amp = 0.0;
                } else {
                    amp *= std::sqrt(static_cast<double>(o));
                    --o;
                }
            }
        }
        if (amp == 0.0) continue;
        if (auto row = basis->index_of(occ)) {
            m(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) += amp;
        }
    }
    return Operator(basis, std::move(m));
}

Operator ladder(const BasisPtr& basis, ModeId mode, Ladder kind) {
    bool constrained = false;
    for (const auto& c : basis->constraints()) {
        if (std::find(c.modes.begin(), c.modes.end(), mode) != c.modes.end()) constrained = true;
    }
    if (!basis->has_mode(mode)) throw BasisError("unknown mode " + std::string(mode_name(mode)));
    if (!constrained) return ladder_string(basis, {{mode, kind}});

    auto big = std::make_shared<const FockBasis>(basis->enlarged());
    if (big->dim() > 4096) throw BasisError("enlarged basis too large for a raw ladder operator; use ladder_string");
    return ladder_string(big, {{mode, kind}});
}

Operator number(const BasisPtr& basis, ModeId mode) {
    const auto s = basis->slot(mode);
    Vector d(static_cast<Eigen::Index>(basis->dim()));
    for (std::size_t i = 0; i < basis->dim(); ++i) d(static_cast<Eigen::Index>(i)) = basis->state(i)[s];
    return Operator(basis, d.asDiagonal().toDenseMatrix());
}

Operator total_number(const BasisPtr& basis, const std::vector<ModeId>& modes) {
    Operator n = Operator::zero(basis);
    for (ModeId m : modes) n = n + number(basis, m);
    return n;
}

Operator hop(const BasisPtr& basis, ModeId to, ModeId from) {
    return ladder_string(basis, {{to, Ladder::Create}, {from, Ladder::Annihilate}});
}

Operator restrict_to(const Operator& op, const BasisPtr& target) {
    const auto& src = *op.basis();
    const auto n = target->dim();
    if (target->modes() != src.modes()) throw BasisError("restriction requires identical mode lists");
    std::vector<std::size_t> map(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto idx = src.index_of(target->state(i));
        if (!idx) throw BasisError("target state not contained in the source basis");
        map[i] = *idx;
    }
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                op.matrix()(static_cast<Eigen::Index>(map[r]), static_cast<Eigen::Index>(map[c]));
    return Operator(target, std::move(m));
}

Vector fock_ket(const FockBasis& basis, const std::vector<ModeId>& created) {
    Occupation occ(basis.modes().size(), 0);
    for (ModeId m : created) occ[basis.slot(m)] += 1;
    auto idx = basis.index_of(occ);
    if (!idx) throw BasisError("requested Fock state is not in the basis");
    Vector v = Vector::Zero(static_cast<Eigen::Index>(basis.dim()));
    v(static_cast<Eigen::Index>(*idx)) = 1.0;
    return v;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace bosedeph
