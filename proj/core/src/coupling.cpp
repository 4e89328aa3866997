#include "fsim/coupling.hpp"

#include <cmath>
#include <cstdio>

#include "fsim/errors.hpp"

namespace fsim {

namespace {

void check_map(const TransferMap& map, const SolidMesh& solid) {
    if (map.stale_for(solid)) throw StaleMapError();
}

void check_u(const TransferMap& map, std::span<const double> u, const char* what) {
    if (static_cast<int>(u.size()) != 2 * map.n_vel_nodes)
        throw std::invalid_argument(std::string(what) + ": dof vector size mismatch");
}

/// Emit the matrix entries of one quadrature point of the one-field left side.
/// mass_coeff multiplies phi_a phi_b (per component), dform_coeff the D:D form,
/// and Z the combined grad-contraction matrix of the D1/D2/D3 operators.
template <typename Emit>
void fdm_lhs_point(const TransferRecord& rec, double mass_coeff, double dform_coeff, const Mat2& Z,
                   Emit&& emit) {
    const double w = rec.weight;
    std::array<Vec2, 9> Zg;
    for (int b = 0; b < 9; ++b) Zg[b] = Z * rec.grad[b];
    for (int a = 0; a < 9; ++a) {
        const Vec2 f = rec.grad[a];
        const double fa[2] = {f.x, f.y};
        for (int b = 0; b < 9; ++b) {
            const Vec2 g = rec.grad[b];
            const double mass = mass_coeff * rec.phi[a] * rec.phi[b];
            const double fg = dot(f, g);
            const double zf = dot(f, Zg[b]);
            const double zg[2] = {Zg[b].x, Zg[b].y};
            const double gb[2] = {g.x, g.y};
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) {
                    double v = 0.0;
                    if (c == d) v += mass + dform_coeff * 2.0 * fg + zf;
                    v += dform_coeff * 2.0 * fa[d] * gb[c] + fa[d] * zg[c];
                    emit(a, b, c, d, w * v);
                }
        }
    }
}

std::string fingerprint_tag(const char* scheme, double dt) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s dt=%g", scheme, dt);
    return buf;
}

Mat2 combined_z(const Mat2& s, const Mat2& Gn, double c1, double dt) {
    // dt c1 D1 + dt^2 c1 (D2 + D3)  <=>  Z = c1 dt (s + dt Gn (I + s))
    return (c1 * dt) * (s + dt * (Gn * (Mat2::identity() + s)));
}

} // namespace

std::vector<double> assemble_fsi_force(const TransferMap& map, const SolidMesh& solid,
                                       const SolidState& state, std::span<const double> u_eval,
                                       std::span<const double> u_n, const FsiParams& params,
                                       double dt, const TemporalPair& temporal) {
    check_map(map, solid);
    check_u(map, u_eval, "assemble_fsi_force");
    check_u(map, u_n, "assemble_fsi_force");
    std::span<const double> u_tnew = temporal.u_new.empty() ? u_eval : temporal.u_new;
    std::span<const double> u_told = temporal.u_old.empty() ? u_n : temporal.u_old;

    const double temporal_coeff = (params.rho_r - 1.0) / dt;
    const double visc_coeff = (params.mu_r - 1.0) / (2.0 * params.re);

    std::vector<double> force(2 * map.n_vel_nodes, 0.0);
    for (int k = 0; k < map.size(); ++k) {
        const auto& rec = map.records[k];
        const double w = rec.weight;

        Vec2 load;
        if (temporal_coeff != 0.0) {
            const Vec2 du = interp_value(rec, u_tnew) - interp_value(rec, u_told);
            load += (temporal_coeff * w) * du;
        }
        distribute_to_background(rec, load, force);

        const Mat2 G = interp_gradient(rec, u_eval);
        Mat2 T = neo_hookean_force_tensor(update_s(state.s[k], G, dt), params.c1_tilde);
        // D u : D v = 2 D u : grad v since D u is symmetric.
        if (visc_coeff != 0.0) T += (2.0 * visc_coeff) * (G + transpose(G));
        for (int a = 0; a < 9; ++a) {
            const Vec2 tf = T * rec.grad[a];
            force[2 * rec.nodes[a]] += w * tf.x;
            force[2 * rec.nodes[a] + 1] += w * tf.y;
        }
    }
    return force;
}

double add_fdm_lhs(const TransferMap& map, const SolidMesh& solid, const SolidState& state,
                   const FsiParams& params, double dt, const VelocityPattern& vp, CsrMatrix& A) {
    check_map(map, solid);
    const double mass_coeff = (params.rho_r - 1.0) / dt;
    const double dform_coeff = (params.mu_r - 1.0) / (2.0 * params.re) + 0.5 * dt * params.c1_tilde;
    double max_z = 0.0;
    for (int k = 0; k < map.size(); ++k) {
        const auto& rec = map.records[k];
        const Mat2 Z = combined_z(state.s[k], state.grad_u[k], params.c1_tilde, dt);
        max_z = std::max(max_z, max_abs(Z));
        const int e = rec.element;
        fdm_lhs_point(rec, mass_coeff, dform_coeff, Z, [&](int a, int b, int c, int d, double v) {
            A.values[vp.scatter(e, a, b, c, d)] += v;
        });
    }
    return max_z;
}

CsrMatrix assemble_fdm_lhs(const TransferMap& map, const SolidMesh& solid, const SolidState& state,
                           const FsiParams& params, double dt) {
    check_map(map, solid);
    CsrBuilder builder(2 * map.n_vel_nodes, 2 * map.n_vel_nodes);
    const double mass_coeff = (params.rho_r - 1.0) / dt;
    const double dform_coeff = (params.mu_r - 1.0) / (2.0 * params.re) + 0.5 * dt * params.c1_tilde;
    for (int k = 0; k < map.size(); ++k) {
        const auto& rec = map.records[k];
        const Mat2 Z = combined_z(state.s[k], state.grad_u[k], params.c1_tilde, dt);
        fdm_lhs_point(rec, mass_coeff, dform_coeff, Z, [&](int a, int b, int c, int d, double v) {
            builder.add(2 * rec.nodes[a] + c, 2 * rec.nodes[b] + d, v);
        });
    }
    return builder.build();
}

std::vector<double> assemble_fdm_rhs(const TransferMap& map, const SolidMesh& solid,
                                     const SolidState& state, const FsiParams& params, double dt) {
    check_map(map, solid);
    std::vector<double> rhs(2 * map.n_vel_nodes, 0.0);
    const double c1 = params.c1_tilde;
    for (int k = 0; k < map.size(); ++k) {
        const auto& rec = map.records[k];
        const Mat2& s = state.s[k];
        const Mat2& Gn = state.grad_u[k];
        // -c1 s + dt^2 c1 (Gn Gn^T + Gn s Gn^T)
        const Mat2 T = c1 * ((dt * dt) * (Gn * ((Mat2::identity() + s) * transpose(Gn))) - s);
        for (int a = 0; a < 9; ++a) {
            const Vec2 tf = T * rec.grad[a];
            rhs[2 * rec.nodes[a]] += rec.weight * tf.x;
            rhs[2 * rec.nodes[a] + 1] += rec.weight * tf.y;
        }
    }
    return rhs;
}

std::vector<double> assemble_solid_velocity_load(const TransferMap& map, const SolidMesh& solid,
                                                 std::span<const double> u, double coeff) {
    check_map(map, solid);
    check_u(map, u, "assemble_solid_velocity_load");
    std::vector<double> rhs(2 * map.n_vel_nodes, 0.0);
    if (coeff == 0.0) return rhs;
    for (const auto& rec : map.records)
        distribute_to_background(rec, (coeff * rec.weight) * interp_value(rec, u), rhs);
    return rhs;
}

std::vector<double> assemble_solid_constant_load(const TransferMap& map, const SolidMesh& solid,
                                                 const Vec2& g, double coeff) {
    check_map(map, solid);
    std::vector<double> rhs(2 * map.n_vel_nodes, 0.0);
    if (coeff == 0.0) return rhs;
    for (const auto& rec : map.records)
        distribute_to_background(rec, (coeff * rec.weight) * g, rhs);
    return rhs;
}

double consistency_check_fdm_vs_force(const TransferMap& map, const SolidMesh& solid,
                                      const SolidState& state, std::span<const double> u,
                                      const FsiParams& params, double dt) {
    check_map(map, solid);
    check_u(map, u, "consistency_check_fdm_vs_force");
    const CsrMatrix A = assemble_fdm_lhs(map, solid, state, params, dt);
    const std::vector<double> b = assemble_fdm_rhs(map, solid, state, params, dt);

    std::vector<double> lhs_action(2 * map.n_vel_nodes, 0.0);
    matvec(A, u, lhs_action);
    for (std::size_t i = 0; i < b.size(); ++i) lhs_action[i] -= b[i];

    // Linearized force with the temporal history term dropped (it cancels).
    std::vector<double> f(2 * map.n_vel_nodes, 0.0);
    const double temporal_coeff = (params.rho_r - 1.0) / dt;
    const double visc_coeff = (params.mu_r - 1.0) / (2.0 * params.re);
    for (int k = 0; k < map.size(); ++k) {
        const auto& rec = map.records[k];
        const double w = rec.weight;
        if (temporal_coeff != 0.0)
            distribute_to_background(rec, (temporal_coeff * w) * interp_value(rec, u), f);
        const Mat2 G = interp_gradient(rec, u);
        Mat2 T = params.c1_tilde * update_s_linearized(state.s[k], state.grad_u[k], G, dt);
        if (visc_coeff != 0.0) T += (2.0 * visc_coeff) * (G + transpose(G));
        for (int a = 0; a < 9; ++a) {
            const Vec2 tf = T * rec.grad[a];
            f[2 * rec.nodes[a]] += w * tf.x;
            f[2 * rec.nodes[a] + 1] += w * tf.y;
        }
    }

    double sq = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double d = lhs_action[i] - f[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

SolidContribution fdm_contribution(const TransferMap& map, const SolidMesh& solid,
                                   const SolidState& state, const FsiParams& params, double dt) {
    SolidContribution contrib;
    contrib.lhs_delta = assemble_fdm_lhs(map, solid, state, params, dt);
    contrib.rhs_delta = assemble_fdm_rhs(map, solid, state, params, dt);
    contrib.fingerprint = fingerprint_tag("one-field-fdm", dt);
    return contrib;
}

SolidContribution explicit_contribution(const TransferMap& map, const SolidMesh& solid,
                                        const SolidState& state, std::span<const double> u_eval,
                                        std::span<const double> u_n, const FsiParams& params,
                                        double dt, const TemporalPair& temporal) {
    SolidContribution contrib;
    auto force = assemble_fsi_force(map, solid, state, u_eval, u_n, params, dt, temporal);
    contrib.rhs_delta.resize(force.size());
    for (std::size_t i = 0; i < force.size(); ++i) contrib.rhs_delta[i] = -force[i];
    contrib.fingerprint = fingerprint_tag("explicit-ifem", dt);
    return contrib;
}

} // namespace fsim
