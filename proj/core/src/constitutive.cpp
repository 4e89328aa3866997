#include "fsim/constitutive.hpp"

#include <cmath>
#include <stdexcept>

namespace fsim {

Mat2 update_s(const Mat2& s_n, const Mat2& grad_u, double dt) {
    const Mat2 G = grad_u;
    const Mat2 Gt = transpose(G);
    Mat2 s = dt * (G + Gt + dt * (G * Gt));
    s += s_n;
    s += (dt * dt) * (G * s_n * Gt);
    s += dt * (G * s_n);
    s += dt * (s_n * Gt);
    return s;
}

Mat2 update_s_linearized(const Mat2& s_n, const Mat2& grad_u_n, const Mat2& grad_u, double dt) {
    const auto lt = linearized_terms(s_n, grad_u_n, grad_u);
    const Mat2 G = grad_u;
    Mat2 s = dt * (G + transpose(G));
    s += s_n;
    s += dt * lt.d1;
    s += (dt * dt) * (lt.d2 + lt.d3);
    s -= (dt * dt) * (lt.rhs_quad + lt.rhs_squad);
    return s;
}

LinearizedTerms linearized_terms(const Mat2& s_n, const Mat2& grad_u_n, const Mat2& grad_u) {
    const Mat2 G = grad_u;
    const Mat2 Gn = grad_u_n;
    const Mat2 Gt = transpose(G);
    const Mat2 Gnt = transpose(Gn);
    LinearizedTerms lt;
    lt.d1 = G * s_n + s_n * Gt;
    lt.d2 = G * Gnt + Gn * Gt;
    lt.d3 = G * (s_n * Gnt) + Gn * (s_n * Gt);
    lt.rhs_quad = Gn * Gnt;
    lt.rhs_squad = Gn * (s_n * Gnt);
    return lt;
}

Mat2 neo_hookean_force_tensor(const Mat2& s, double c1_tilde) { return c1_tilde * s; }

Mat2 stress_compressible_neo_hookean(const Mat2& F, const Mat2& grad_u, const MaterialParams& p) {
    const double J = det(F);
    if (J <= 0.0)
        throw std::domain_error("stress_compressible_neo_hookean: inverted element (det F <= 0)");
    const Mat2 b_minus_i = F * transpose(F) - Mat2::identity();
    const Mat2 Du = grad_u + transpose(grad_u);
    const double pressure_like = std::pow(J, -1.0 / (1.0 - 2.0 * p.nu));
    return p.c1_tilde * (1.0 / J) * b_minus_i + p.mu_r * Du - pressure_like * Mat2::identity();
}

Mat2 green_strain(const Mat2& F) {
    return 0.5 * (transpose(F) * F - Mat2::identity());
}

Mat2 svk_stress(const Mat2& E, const MaterialParams& p) {
    return 2.0 * p.lame_mu * E + (p.lame_lambda * trace(E)) * Mat2::identity();
}

namespace {

Mat2 modified_strain(const Mat2& grad_d, const Mat2& grad_d_ref) {
    // E~ = (D_X d + grad^T d~ grad d + grad^T d grad d~) / 2
    return 0.5 * (grad_d + transpose(grad_d) + transpose(grad_d_ref) * grad_d +
                  transpose(grad_d) * grad_d_ref);
}

} // namespace

double svk_linearized_virtual_work(const Mat2& grad_d, const Mat2& grad_d_ref, const Mat2& grad_v,
                                   const MaterialParams& p) {
    const Mat2 E_tilde = modified_strain(grad_d, grad_d_ref);
    const Mat2 dE_tilde = modified_strain(grad_v, grad_d_ref);
    const Mat2 correction = svk_stress(transpose(grad_d_ref) * grad_d_ref, p);
    return ddot(svk_stress(E_tilde, p), dE_tilde) - 0.5 * ddot(correction, dE_tilde);
}

double svk_virtual_work(const Mat2& grad_d, const Mat2& grad_v, const MaterialParams& p) {
    const Mat2 F = Mat2::identity() + grad_d;
    const Mat2 E = green_strain(F);
    const Mat2 dE = 0.5 * (transpose(F) * grad_v + transpose(grad_v) * F);
    return ddot(svk_stress(E, p), dE);
}

Mat2 update_deformation(const Mat2& F_n, const Mat2& grad_X_u, double dt) {
    return F_n + dt * grad_X_u;
}

} // namespace fsim
