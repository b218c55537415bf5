// model.cpp — Hamiltonians, dephasing operators and projectors

#include "bosedeph/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bosedeph {

std::vector<std::string> ModelParams::violations() const {
    std::vector<std::string> v;
    const auto finite = [&](double x, const char* name) {
        if (!std::isfinite(x)) v.push_back(std::string(name) + " must be finite");
    };
    finite(omega_s, "omega_s");
    finite(J, "J");
    finite(phi, "phi");
    finite(g0, "g0");
    finite(lambda, "lambda");
    finite(omega_0, "omega_0");
    if (!(J > 0)) v.push_back("J must be > 0");
    if (!(lambda > 0)) v.push_back("lambda must be > 0 (undamped bath not supported)");
    if (!(g0 >= 0)) v.push_back("g0 must be >= 0");
    return v;
}

void ModelParams::validate() const {
    const auto v = violations();
    if (v.empty()) return;
    std::ostringstream os;
    os << "invalid model parameters:";
    for (const auto& s : v) os << "\n  - " << s;
    throw std::invalid_argument(os.str());
}

Operator build_H_S(const ModelParams& p, const BasisPtr& basis) {
    return system_number(basis) * cplx(p.omega_s);
}

Operator build_H_D(const ModelParams& p, const BasisPtr& basis) {
    const cplx ph = std::polar(1.0, p.phi);
    Operator h = Operator::zero(basis);
    for (auto [l, r] : {std::pair{ModeId::LUp, ModeId::RUp}, std::pair{ModeId::LDown, ModeId::RDown}}) {
        h = h + hop(basis, l, r) * ph + hop(basis, r, l) * std::conj(ph);
    }
    return h * cplx(0.5 * p.J);
}

Operator build_sigma_z(const BasisPtr& basis, Site x) {
    if (x == Site::L) return number(basis, ModeId::LUp) - number(basis, ModeId::LDown);
    return number(basis, ModeId::RUp) - number(basis, ModeId::RDown);
}

Operator build_alpha_L(const ModelParams& p, const BasisPtr& basis) {
    const cplx ph = std::polar(1.0, p.phi);
    return hop(basis, ModeId::RUp, ModeId::LUp) * std::conj(ph) - hop(basis, ModeId::LUp, ModeId::RUp) * ph -
           hop(basis, ModeId::RDown, ModeId::LDown) * std::conj(ph) + hop(basis, ModeId::LDown, ModeId::RDown) * ph;
}

ABC build_ABC(const ModelParams& p, const BasisPtr& basis) {
    const auto zl = build_sigma_z(basis, Site::L);
    const auto zr = build_sigma_z(basis, Site::R);
    return ABC{(zl + zr) * cplx(0.5), (zl - zr) * cplx(0.5), build_alpha_L(p, basis) * cplx(0.0, 0.5)};
}

Operator build_Pi_LR(const BasisPtr& basis) {
    const auto sl = {basis->slot(ModeId::LUp), basis->slot(ModeId::LDown)};
    const auto sr = {basis->slot(ModeId::RUp), basis->slot(ModeId::RDown)};
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(basis->dim()), static_cast<Eigen::Index>(basis->dim()));
    for (std::size_t i = 0; i < basis->dim(); ++i) {
        const auto& s = basis->state(i);
        int nl = 0, nr = 0;
        for (auto k : sl) nl += s[k];
        for (auto k : sr) nr += s[k];
        if (nl == 1 && nr == 1) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return Operator(basis, std::move(m));
}

Operator system_number(const BasisPtr& basis) {
    return total_number(basis, {std::begin(kSystemModes), std::end(kSystemModes)});
}

Operator build_H_pm(const ModelParams& p, double g_pm, double omega_pm, const BasisPtr& extended_basis) {
    if (!extended_basis->has_mode(ModeId::PmL) || !extended_basis->has_mode(ModeId::PmR))
        throw BasisError("pseudomode Hamiltonian needs PM_L and PM_R in the basis");
    Operator h = build_H_S(p, extended_basis) + build_H_D(p, extended_basis);
    for (auto [site, pm] : {std::pair{Site::L, ModeId::PmL}, std::pair{Site::R, ModeId::PmR}}) {
        const auto c = ladder_string(extended_basis, {{pm, Ladder::Annihilate}});
        const auto cd = ladder_string(extended_basis, {{pm, Ladder::Create}});
        h = h + number(extended_basis, pm) * cplx(omega_pm) +
            build_sigma_z(extended_basis, site) * (cd + c) * cplx(g_pm);
    }
    return h;
}

OperatorSet build_operator_set(const ModelParams& p, const BasisPtr& basis) {
    auto abc = build_ABC(p, basis);
    return OperatorSet{build_H_S(p, basis), build_H_D(p, basis), build_sigma_z(basis, Site::L),
                       build_sigma_z(basis, Site::R), std::move(abc.A), std::move(abc.B), std::move(abc.C),
                       build_Pi_LR(basis)};
}

}  // namespace bosedeph
