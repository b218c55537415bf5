// generators.hpp — Master-equation generators acting on dense density matrices
//
// All generators write d(rho)/dt for a given time and state. Lindblad-type
// generators with constant coefficients keep their operators in sparse form,
// since the pseudomode-extended spaces are only a few hundred states wide but
// every operator has a handful of entries per row.

#pragma once

#include <memory>
#include <vector>

#include <Eigen/Sparse>

#include "bosedeph/bath.hpp"
#include "bosedeph/model.hpp"

namespace bosedeph {

using SparseMatrix = Eigen::SparseMatrix<cplx>;

class Generator {
public:
    virtual ~Generator() = default;
    virtual void apply(double t, const Matrix& rho, Matrix& out) const = 0;
    virtual bool autonomous() const = 0;

    Matrix operator()(double t, const Matrix& rho) const {
        Matrix out(rho.rows(), rho.cols());
        apply(t, rho, out);
        return out;
    }
};

/// D[L]rho = L rho L† - 1/2 {L†L, rho}
Matrix dissipator(const Matrix& L, const Matrix& rho);

struct JumpOperator {
    Matrix op;
    double rate{0.0};
};

/// -i[H, rho] + sum_k rate_k D[L_k] rho with time-independent H and L_k.
class LindbladGenerator final : public Generator {
public:
    LindbladGenerator(const Matrix& H, const std::vector<JumpOperator>& jumps);
    void apply(double t, const Matrix& rho, Matrix& out) const override;
    bool autonomous() const override { return true; }

private:
    SparseMatrix h_eff_;  // H - (i/2) sum_k rate_k L_k† L_k
    std::vector<SparseMatrix> jumps_;
    std::vector<SparseMatrix> jumps_adj_;
    std::vector<double> rates_;
    mutable Matrix work_;
};

/// Precomputed operator products shared by the microscopic generators.
struct CanonicalOperators {
    Matrix H_free;  // H_S + H_D
    Matrix H_D;
    Matrix A, B, C;
    Matrix sigma_z_L, sigma_z_R;

    static CanonicalOperators from(const OperatorSet& ops);
};

/// Microscopic master equation in canonical form, interaction picture:
///   -i[H_can(t), rho] + sum_ij D_ij(t) (F_i rho F_j - 1/2 {F_j F_i, rho}),  F = (B, C).
class CanonicalGenerator final : public Generator {
public:
    CanonicalGenerator(const ModelParams& p, CanonicalOperators ops, int n_baths = 2);
    void apply(double t, const Matrix& rho, Matrix& out) const override;
    bool autonomous() const override { return false; }

    Matrix canonical_hamiltonian(double t) const;

private:
    ModelParams p_;
    CanonicalOperators o_;
    int n_baths_;
    Matrix BB_, CC_, BCs_;  // B^2, C^2, {B, C}
    Matrix FF_[2][2];       // F_j F_i stored at [i][j]
};

/// The same equation in the Schrodinger picture: the jump operators rotate as
/// B(t) = B cos Jt - C sin Jt, C(t) = C cos Jt + B sin Jt and H_S + H_D is added.
class SchrodingerCanonicalGenerator final : public Generator {
public:
    SchrodingerCanonicalGenerator(const ModelParams& p, CanonicalOperators ops, int n_baths = 2);
    void apply(double t, const Matrix& rho, Matrix& out) const override;
    bool autonomous() const override { return false; }

private:
    ModelParams p_;
    CanonicalOperators o_;
    int n_baths_;
};

/// Pre-canonical form with the coefficient matrix Gamma (rows: operator at the
/// earlier time), O = (B, C):
///   g0 sum_ij Re G_ij [O_i rho O_j + O_j rho O_i - O_j O_i rho - rho O_i O_j]
/// + i g0 sum_ij Im G_ij [O_i rho O_j - O_j rho O_i - O_j O_i rho + rho O_i O_j]
class PrecanonicalGenerator final : public Generator {
public:
    PrecanonicalGenerator(const ModelParams& p, CanonicalOperators ops, int n_baths = 2);
    void apply(double t, const Matrix& rho, Matrix& out) const override;
    bool autonomous() const override { return false; }

private:
    ModelParams p_;
    CanonicalOperators o_;
    int n_baths_;
};

/// Second-order time-convolutionless generator written as a double commutator,
///   -sum_X [S_X(t), Lambda_X(t) rho - rho Lambda_X(t)†],
///   S_L = A + B cos Jt + C sin Jt,  S_R = A - B cos Jt - C sin Jt,
///   Lambda_X = g0 (alpha A +- beta B +- kappa C).
/// With include_A = false the A parts are dropped from both S and Lambda.
class Tcl2Generator final : public Generator {
public:
    Tcl2Generator(const ModelParams& p, CanonicalOperators ops, bool include_A, int n_baths = 2);
    void apply(double t, const Matrix& rho, Matrix& out) const override;
    bool autonomous() const override { return false; }

private:
    ModelParams p_;
    CanonicalOperators o_;
    bool include_A_;
    int n_baths_;
};

/// Short-time limit in the interaction picture: the coupling operators freeze to
/// sigma_z,X, giving -sum_X [sigma_X, g0 gamma(t) sigma_X rho - g0 gamma(t)* rho sigma_X].
class ShortTimeGenerator final : public Generator {
public:
    ShortTimeGenerator(const ModelParams& p, CanonicalOperators ops, int n_baths = 2);
    void apply(double t, const Matrix& rho, Matrix& out) const override;
    bool autonomous() const override { return false; }

private:
    ModelParams p_;
    CanonicalOperators o_;
    int n_baths_;
};

}  // namespace bosedeph
