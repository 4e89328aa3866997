#pragma once

#include <vector>

#include "fsim/geometry.hpp"

namespace fsim {

/// Material parameters in dimensionless form, plus the compressible extras
/// used by the pointwise kernels.
struct MaterialParams {
    double c1_tilde = 0.0;   // elastic stiffness / dynamic pressure
    double mu_r = 1.0;       // solid/fluid viscosity ratio
    double rho_r = 1.0;      // solid/fluid density ratio
    double nu = 0.3;         // Poisson's ratio (compressible neo-Hookean)
    double kappa = 1.0;      // bulk-modulus-role parameter
    double lame_mu = 1.0;    // Saint Venant-Kirchhoff Lame constants
    double lame_lambda = 1.0;
};

/// Per-quadrature-point solid history: the strain tensor s = F F^T - I in the
/// current configuration, the previous current-configuration velocity gradient,
/// and the deformation tensor (kept for auditing; J should remain near 1).
struct SolidState {
    std::vector<Mat2> s;
    std::vector<Mat2> grad_u;
    std::vector<Mat2> F;
    std::vector<double> J;

    explicit SolidState(int n_points = 0) { reset(n_points); }
    void reset(int n_points) {
        s.assign(n_points, Mat2::zero());
        grad_u.assign(n_points, Mat2::zero());
        F.assign(n_points, Mat2::identity());
        J.assign(n_points, 1.0);
    }
    int size() const { return static_cast<int>(s.size()); }
};

/// One step of the strain recursion in the current configuration:
///   s_t = dt (G + G^T + dt G G^T) + s_n + dt^2 G s_n G^T + dt G s_n + dt s_n G^T
/// with G the current-configuration velocity gradient. This is an algebraic
/// identity for s = F F^T - I under x_t = x_n + dt u_t, not an approximation.
Mat2 update_s(const Mat2& s_n, const Mat2& grad_u, double dt);

/// Same recursion with both quadratic products replaced by their linearizations
/// around grad_u_n (exact when grad_u == grad_u_n, second-order remainder else).
Mat2 update_s_linearized(const Mat2& s_n, const Mat2& grad_u_n, const Mat2& grad_u, double dt);

/// The linear operators of the one-field formulation and the lagged tensors
/// that appear on its right-hand side.
struct LinearizedTerms {
    Mat2 d1;        // G s_n + s_n G^T
    Mat2 d2;        // G Gn^T + Gn G^T
    Mat2 d3;        // G s_n Gn^T + Gn s_n G^T
    Mat2 rhs_quad;  // Gn Gn^T
    Mat2 rhs_squad; // Gn s_n Gn^T
};
LinearizedTerms linearized_terms(const Mat2& s_n, const Mat2& grad_u_n, const Mat2& grad_u);

/// Elastic tensor of the incompressible neo-Hookean deviatoric stress: c1~ * s.
Mat2 neo_hookean_force_tensor(const Mat2& s, double c1_tilde);

/// Compressible neo-Hookean Cauchy stress, verbatim:
///   sigma = c1 J^-1 (F F^T - I) + mu_s D(u) - J^(-1/(1-2 nu)) I.
/// Note the formula yields sigma = -I in the rest state; kept as printed.
Mat2 stress_compressible_neo_hookean(const Mat2& F, const Mat2& grad_u, const MaterialParams& p);

/// Lagrangian Green strain E = (F^T F - I) / 2.
Mat2 green_strain(const Mat2& F);

/// Saint Venant-Kirchhoff second Piola-Kirchhoff stress S = 2 mu E + lambda tr(E) I.
Mat2 svk_stress(const Mat2& E, const MaterialParams& p);

/// Linearized SVK virtual-work density at displacement gradient grad_d_ref:
///   S(E~) : dE~ - 1/2 S(grad_d_ref^T grad_d_ref) : dE~,
/// all gradients with respect to reference coordinates.
double svk_linearized_virtual_work(const Mat2& grad_d, const Mat2& grad_d_ref, const Mat2& grad_v,
                                   const MaterialParams& p);

/// Exact SVK virtual-work density S(E) : dE at F = I + grad_d.
double svk_virtual_work(const Mat2& grad_d, const Mat2& grad_v, const MaterialParams& p);

/// Deformation-tensor update F_{n+1} = F_n + dt grad_X(u); returns the new tensor.
Mat2 update_deformation(const Mat2& F_n, const Mat2& grad_X_u, double dt);

} // namespace fsim
