#pragma once

#include <span>
#include <string>
#include <vector>

#include "fsim/constitutive.hpp"
#include "fsim/fem.hpp"
#include "fsim/mesh.hpp"
#include "fsim/sparse.hpp"

namespace fsim {

/// Dimensionless parameters the solid-domain integrals depend on.
struct FsiParams {
    double re = 1.0;
    double rho_r = 1.0;
    double mu_r = 1.0;
    double c1_tilde = 0.0;
};

/// What one coupling strategy adds to the diffusion-step system.
/// Explicit forcing never contributes a matrix part.
struct SolidContribution {
    CsrMatrix lhs_delta;            // empty (no pattern) for explicit forcing
    std::vector<double> rhs_delta;  // addition to the right-hand side
    std::string fingerprint;        // scheme tag + dt used, for audit

    bool has_lhs() const { return lhs_delta.pattern != nullptr; }
};

/// Velocities used for the temporal term of the force when they differ from
/// (u_eval, u_n); the classical explicit scheme uses the previous two steps.
struct TemporalPair {
    std::span<const double> u_new = {};
    std::span<const double> u_old = {};
};

/// Discrete FSI force over the current solid domain:
///   (rho_r-1) int (u_new - u_old)/dt . v
/// + (mu_r-1)/(2 Re) int D u_eval : D v
/// + c1~ int (F F^T - I) : grad v,   with F F^T - I = update_s(s_n, grad u_eval, dt).
/// By default the temporal pair is (u_eval, u_n).
std::vector<double> assemble_fsi_force(const TransferMap& map, const SolidMesh& solid,
                                       const SolidState& state, std::span<const double> u_eval,
                                       std::span<const double> u_n, const FsiParams& params,
                                       double dt, const TemporalPair& temporal = {});

/// Matrix additions of the one-field formulation: the solid mass and viscous
/// deltas plus the dt c1~/2 D:D, dt c1~ D1 and dt^2 c1~ (D2+D3) terms.
CsrMatrix assemble_fdm_lhs(const TransferMap& map, const SolidMesh& solid, const SolidState& state,
                           const FsiParams& params, double dt);

/// Same, scatter-added into a matrix on the shared background velocity pattern.
/// Returns the largest |Z| entry over all points, where Z is the grad-contraction
/// matrix of the D1/D2/D3 blocks -- the only source of asymmetry. A zero return
/// certifies that the addition kept the operator symmetric.
double add_fdm_lhs(const TransferMap& map, const SolidMesh& solid, const SolidState& state,
                   const FsiParams& params, double dt, const VelocityPattern& vp, CsrMatrix& A);

/// Right-hand-side additions of the one-field formulation:
///   -c1~ int s_n : grad v + dt^2 c1~ int (Gn Gn^T + Gn s_n Gn^T) : grad v.
/// The solid temporal history term (rho_r-1)/dt int u_n . v is not included
/// here; see assemble_solid_velocity_load.
std::vector<double> assemble_fdm_rhs(const TransferMap& map, const SolidMesh& solid,
                                     const SolidState& state, const FsiParams& params, double dt);

/// coeff * int_solid u . v distributed to the background (solid mass action).
std::vector<double> assemble_solid_velocity_load(const TransferMap& map, const SolidMesh& solid,
                                                 std::span<const double> u, double coeff);

/// coeff * int_solid g . v for a constant vector g (solid gravity load).
std::vector<double> assemble_solid_constant_load(const TransferMap& map, const SolidMesh& solid,
                                                 const Vec2& g, double coeff);

/// Residual of the rearrangement identity between the one-field system and the
/// linearized implicit force:
///   || [assemble_fdm_lhs . u - assemble_fdm_rhs] - F_lin(u) ||_2,
/// where F_lin evaluates the force with update_s_linearized. The u_n history
/// part of the temporal term appears identically on both sides and cancels, so
/// the residual does not depend on it. Near round-off for every u.
double consistency_check_fdm_vs_force(const TransferMap& map, const SolidMesh& solid,
                                      const SolidState& state, std::span<const double> u,
                                      const FsiParams& params, double dt);

/// Bundled contributions per scheme (audit type of the coupling module).
SolidContribution fdm_contribution(const TransferMap& map, const SolidMesh& solid,
                                   const SolidState& state, const FsiParams& params, double dt);
SolidContribution explicit_contribution(const TransferMap& map, const SolidMesh& solid,
                                        const SolidState& state, std::span<const double> u_eval,
                                        std::span<const double> u_n, const FsiParams& params,
                                        double dt, const TemporalPair& temporal = {});

} // namespace fsim
