// model.hpp — Named operators of the two-site pseudospin boson model

#pragma once

#include <string>
#include <vector>

#include "bosedeph/fock.hpp"

namespace bosedeph {

/// Physical parameters (hbar = 1). The tunneling frequency J plays the role of
/// the rotation frequency Omega of the interaction-picture operators.
struct ModelParams {
    double omega_s{1.0};  // on-site mode frequency
    double J{1.0};        // tunneling amplitude
    double phi{0.0};      // tunneling phase
    double g0{0.0};       // overall system-bath coupling strength
    double lambda{1.0};   // Lorentzian half-width
    double omega_0{0.0};  // Lorentzian center frequency

    /// Every violated constraint, empty when valid.
    std::vector<std::string> violations() const;
    void validate() const;  // throws std::invalid_argument listing all violations
};

enum class Site { L, R };

/// All system operators on one basis of the four system modes.
/// A, B, C are the Hermitian operators of the interaction-picture coupling
/// e^{iH_D t} sigma_z,L e^{-iH_D t} = A + B cos(Jt) + C sin(Jt).
struct OperatorSet {
    Operator H_S;
    Operator H_D;
    Operator sigma_z_L;
    Operator sigma_z_R;
    Operator A;
    Operator B;
    Operator C;
    Operator Pi_LR;
};

Operator build_H_S(const ModelParams& p, const BasisPtr& basis);
Operator build_H_D(const ModelParams& p, const BasisPtr& basis);
Operator build_sigma_z(const BasisPtr& basis, Site x);

/// Hopping combination R†↑L↑ − L†↑R↑ − R†↓L↓ + L†↓R↓, with the tunneling phase
/// attached so that [H_D, sigma_z,L] = (J/2) alpha_L holds for any phi.
Operator build_alpha_L(const ModelParams& p, const BasisPtr& basis);

struct ABC {
    Operator A;
    Operator B;
    Operator C;
};
ABC build_ABC(const ModelParams& p, const BasisPtr& basis);

/// Projector onto one particle per site.
Operator build_Pi_LR(const BasisPtr& basis);

/// Embedding Hamiltonian H_S + H_D + sum_X [omega_pm c†c + g_pm sigma_z,X (c† + c)].
Operator build_H_pm(const ModelParams& p, double g_pm, double omega_pm, const BasisPtr& extended_basis);

OperatorSet build_operator_set(const ModelParams& p, const BasisPtr& basis);

/// Total number of particles in the four system modes.
Operator system_number(const BasisPtr& basis);

}  // namespace bosedeph
