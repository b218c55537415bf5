// fock.hpp — Finite bosonic Fock spaces and the dense operator algebra built on them

#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace bosedeph {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

class BasisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Canonical order: L_up < L_down < R_up < R_down < PM_L < PM_R.
enum class ModeId : int { LUp = 0, LDown = 1, RUp = 2, RDown = 3, PmL = 4, PmR = 5 };

inline constexpr ModeId kSystemModes[] = {ModeId::LUp, ModeId::LDown, ModeId::RUp, ModeId::RDown};
inline constexpr ModeId kPseudoModes[] = {ModeId::PmL, ModeId::PmR};

std::string_view mode_name(ModeId m);
ModeId parse_mode(std::string_view name);
bool is_system_mode(ModeId m);

enum class Ladder { Create, Annihilate };

using Occupation = std::vector<int>;

/// Total-particle-number constraint on a subset of the basis modes.
struct SectorConstraint {
    std::vector<ModeId> modes;
    int total{0};
};

/// Enumerated occupation-number basis. States are sorted lexicographically by
/// occupation vector (mode order as given, which must be canonical).
class FockBasis {
public:
    FockBasis(std::vector<ModeId> modes, std::vector<int> caps,
              std::vector<SectorConstraint> constraints);

    /// Basis built from an explicit list of occupation vectors; they are sorted
    /// and deduplicated. Used for symmetry-reduced subspaces.
    static FockBasis from_states(std::vector<ModeId> modes, std::vector<int> caps,
                                 std::vector<Occupation> states);

    std::size_t dim() const { return states_.size(); }
    const std::vector<ModeId>& modes() const { return modes_; }
    const std::vector<int>& caps() const { return caps_; }
    const std::vector<SectorConstraint>& constraints() const { return constraints_; }
    const Occupation& state(std::size_t i) const { return states_.at(i); }
    const std::vector<Occupation>& states() const { return states_; }

    std::optional<std::size_t> index_of(const Occupation& occ) const;
    bool has_mode(ModeId m) const;
    std::size_t slot(ModeId m) const;  // position of the mode in the occupation vector
    int occupation(std::size_t i, ModeId m) const { return states_[i][slot(m)]; }

    /// Same modes and caps with every constraint dropped.
    FockBasis enlarged() const;

    /// Sub-basis of the states accepted by the predicate.
    FockBasis filtered(const std::function<bool(const Occupation&)>& keep) const;

    bool same_as(const FockBasis& other) const;
    std::string describe() const;

private:
    FockBasis() = default;
    void build_index();

    std::vector<ModeId> modes_;
    std::vector<int> caps_;
    std::vector<SectorConstraint> constraints_;
    std::vector<Occupation> states_;
    std::map<Occupation, std::size_t> index_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

/// Enumerate all occupation vectors with 0..max_occupation per mode. When a sector
/// is given it constrains the total number of particles in the system modes
/// present in `modes`.
BasisPtr enumerate_basis(const std::vector<ModeId>& modes, int max_occupation,
                         std::optional<int> sector = std::nullopt);

/// The N=2 two-site, two-spin sector (dimension 10).
BasisPtr system_basis(int particles = 2);

/// Dense complex matrix bound to a basis. Immutable in spirit: all algebra
/// returns new operators.
class Operator {
public:
    Operator(BasisPtr basis, Matrix m);
    static Operator zero(BasisPtr basis);
    static Operator identity(BasisPtr basis);

    const BasisPtr& basis() const { return basis_; }
    const Matrix& matrix() const { return m_; }
    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }

    Operator adjoint() const;
    cplx trace() const { return m_.trace(); }
    double hermiticity_error() const;

    Operator operator+(const Operator& o) const;
    Operator operator-(const Operator& o) const;
    Operator operator*(const Operator& o) const;
    Operator operator*(cplx s) const;
    Operator operator-() const;
    friend Operator operator*(cplx s, const Operator& o) { return o * s; }

    Vector apply(const Vector& v) const;

private:
    void check_same_basis(const Operator& o) const;

    BasisPtr basis_;
    Matrix m_;
};

Operator compose(const Operator& a, const Operator& b);
Operator add(const Operator& a, const Operator& b);
Operator scale(const Operator& a, cplx s);
Operator adjoint(const Operator& a);
Operator commutator(const Operator& a, const Operator& b);
Operator anticommutator(const Operator& a, const Operator& b);

/// Product of ladder operators, written left to right as in the algebra
/// (the rightmost factor acts first). Intermediate states are cap-limited;
/// results falling outside the basis (e.g. another particle-number sector)
/// are projected out. For number-conserving strings this is identical to
/// building the product on the enlarged basis and restricting it.
Operator ladder_string(const BasisPtr& basis, const std::vector<std::pair<ModeId, Ladder>>& factors);

/// Raw ladder operator. On a basis with an active sector constraint touching
/// `mode` it is built on `basis->enlarged()`; use `restrict_to` after composing.
Operator ladder(const BasisPtr& basis, ModeId mode, Ladder kind);

Operator number(const BasisPtr& basis, ModeId mode);
Operator total_number(const BasisPtr& basis, const std::vector<ModeId>& modes);

/// a†_to a_from
Operator hop(const BasisPtr& basis, ModeId to, ModeId from);

/// Restrict an operator on an enlarged basis to the states of `target`.
Operator restrict_to(const Operator& op, const BasisPtr& target);

/// Normalized Fock ket obtained by creating one particle in each listed mode.
Vector fock_ket(const FockBasis& basis, const std::vector<ModeId>& created);

double max_abs(const Matrix& m);

}  // namespace bosedeph
