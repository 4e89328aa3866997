#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fsim/coupling.hpp"
#include "fsim/fem.hpp"
#include "fsim/linalg.hpp"
#include "fsim/mesh.hpp"

namespace fsim {

enum class Scheme { explicit_ifem, implicit_ifem, one_field_fdm };

std::string to_string(Scheme s);
std::optional<Scheme> scheme_from_string(const std::string& name);

struct SchemeConfig {
    double re = 100.0;
    double rho_r = 1.0;
    double mu_r = 1.0;
    double c1_tilde = 0.0;
    double fr = 0.0;
    Vec2 g_dir{0.0, -1.0};
    double dt = 1e-3;
    double t_end = 1.0;
    Scheme scheme = Scheme::one_field_fdm;
    double fp_tol = 1e-6;   // implicit fixed-point tolerance
    int fp_max_iters = 200;
    double lin_tol = 1e-10; // CG/BiCGStab relative tolerance
    int lin_max_iters = 20000;
    double pressure_tol = 1e-9; // ||B u|| <= pressure_tol * ||u*||_M
    int pressure_max_outer = 4000;

    void validate() const; // throws std::invalid_argument on a bad field
    FsiParams fsi() const { return {re, rho_r, mu_r, c1_tilde}; }
};

/// Physical quantities feeding the dimensionless groups.
struct PhysicalParams {
    double rho_f = 1.0;
    double rho_s = 1.0;
    double mu_f = 1.0;
    double mu_s = 1.0;
    double c1 = 0.0;
    double length = 1.0;   // L~
    double velocity = 1.0; // U~
    double gravity = 0.0;  // |g|
};

/// Re = rho_f U L / mu_f, rho_r = rho_s/rho_f, mu_r = mu_s/mu_f,
/// c1~ = c1 / (rho_f U^2), Fr = |g| L / U^2.
SchemeConfig nondimensionalize(const PhysicalParams& p);

/// Time-dependent Dirichlet data on a fixed set of velocity dofs.
/// eval(t, dofs, values) fills one value per dof (dofs arrive sorted).
struct DirichletBC {
    std::vector<int> dofs;
    std::function<void(double, std::span<const int>, std::span<double>)> eval;
};

struct SimulationState {
    std::vector<double> u;      // velocity dofs at t_n
    std::vector<double> u_prev; // at t_{n-1} (explicit IFEM temporal term)
    std::vector<double> p;      // pressure dofs at t_n
    SolidMesh solid;
    SolidState solid_state;
    TransferMap qmap; // quadrature-point transfer map on the current configuration
    TransferMap nmap; // nodal map
    double t = 0.0;
    int step = 0;
};

struct StepInfo {
    int fp_iterations = 0;
    double divergence_residual = 0.0; // ||B u_{n+1}|| after the pressure step
    SolverReport convection;
    SolverReport diffusion;
    SolverReport pressure;
};

/// Drives one operator-splitting step: convection, diffusion with the selected
/// coupling strategy, pressure projection, solid update. Owns the fixed
/// background operators; sub-steps are exposed for tests.
class Simulator {
  public:
    Simulator(BackgroundMesh bg, SolidMesh solid, SchemeConfig cfg, DirichletBC bc);

    StepInfo advance();

    /// Rebuilds the dt-dependent fixed operators; state is untouched.
    void set_time_step(double dt);

    // Sub-steps, operating on the current state.
    std::vector<double> convection_step();
    std::vector<double> diffusion_step_explicit(const std::vector<double>& u_third);
    std::vector<double> diffusion_step_implicit(const std::vector<double>& u_third,
                                                int* fp_iterations = nullptr);
    std::vector<double> diffusion_step_fdm(const std::vector<double>& u_third);
    std::pair<std::vector<double>, std::vector<double>>
    pressure_step(const std::vector<double>& u_twothirds, SolverReport* report = nullptr);
    void update_solid(const std::vector<double>& u_next);

    SimulationState& state() { return state_; }
    const SimulationState& state() const { return state_; }
    const SchemeConfig& config() const { return cfg_; }
    const BackgroundMesh& background() const { return bg_; }
    const CsrMatrix& mass() const { return M_; }
    const CsrMatrix& stiffness() const { return K_; }
    const CsrMatrix& divergence() const { return B_; }
    const SolverReport& last_diffusion_report() const { return last_diffusion_; }

    /// Velocity at the solid mesh nodes (current configuration).
    std::vector<Vec2> solid_node_velocities(std::span<const double> u) const;
    /// Kinetic-energy norm sqrt(u^T M u).
    double mass_norm(std::span<const double> u) const;

  private:
    std::vector<double> diffusion_rhs_base(const std::vector<double>& u_third) const;
    std::vector<double> boundary_values(double t) const;
    void check_finite(std::span<const double> v, const char* substep) const;
    std::vector<double> solve_diffusion_system(const CsrMatrix& A, const LinearOperator& pc,
                                               DirichletSet& dset, std::vector<double> rhs,
                                               std::span<const double> bc_values, bool symmetric,
                                               const char* what);

    BackgroundMesh bg_;
    SchemeConfig cfg_;
    DirichletBC bc_;
    SimulationState state_;

    VelocityPattern vp_;
    ScalarPattern sp_;
    CsrMatrix M_;           // velocity mass
    CsrMatrix K_;           // 1/(2Re) D:D
    CsrMatrix B_;           // divergence
    CsrMatrix base_;        // M/dt + K on the shared velocity pattern (pristine)
    CsrMatrix ifem_matrix_; // base_ with Dirichlet rows eliminated (fixed per run)
    std::unique_ptr<IncompleteCholesky> ifem_precond_;
    CsrMatrix mass_constrained_; // mass with identity Dirichlet rows (pressure step)
    std::unique_ptr<IncompleteCholesky> mass_precond_;
    std::unique_ptr<CholeskyOperator> schur_precond_;
    std::unique_ptr<IncompleteCholesky> fdm_ic_; // periodically refactored preconditioners
    std::unique_ptr<IncompleteLU> fdm_ilu_;
    int fdm_ic_step_ = -1000000;  // step of the last factorization per variant
    int fdm_ilu_step_ = -1000000;
    std::vector<char> vel_mask_;
    DirichletSet ifem_dirichlet_;      // bound to the fixed explicit/implicit matrix
    DirichletSet fdm_dirichlet_;       // re-eliminated on the per-step one-field matrix
    DirichletSet scalar_dirichlet_[2]; // per-component sets for the convection solve
    std::vector<std::size_t> scalar_value_pos_[2]; // positions into the sorted bc values
    std::vector<double> grav_rhs_; // Fr * g_dir background load (fixed)
    mutable SolverReport last_convection_;
    mutable SolverReport last_diffusion_;
    mutable SolverReport last_pressure_;
};

} // namespace fsim
