#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fsim/sparse.hpp"

namespace fsim {

struct SolverReport {
    int iterations = 0;
    double final_residual = 0.0;
    bool converged = false;
    double wall_time = 0.0; // seconds
};

/// Operator applied as z = P r (preconditioners, Schur preconditioner, ...).
class LinearOperator {
  public:
    virtual ~LinearOperator() = default;
    virtual void apply(std::span<const double> r, std::span<double> z) const = 0;
};

class IdentityPreconditioner final : public LinearOperator {
  public:
    void apply(std::span<const double> r, std::span<double> z) const override;
};

/// Diagonal (Jacobi) preconditioner z = D^-1 r. Requires positive diagonal.
class JacobiPreconditioner final : public LinearOperator {
  public:
    explicit JacobiPreconditioner(const CsrMatrix& A);
    void apply(std::span<const double> r, std::span<double> z) const override;

  private:
    std::vector<double> inv_diag_;
};

inline JacobiPreconditioner jacobi_preconditioner(const CsrMatrix& A) {
    return JacobiPreconditioner(A);
}

/// Zero-fill incomplete Cholesky preconditioner for SPD systems. Falls back to
/// a diagonal-shifted factorization when a pivot loses positivity.
class IncompleteCholesky final : public LinearOperator {
  public:
    explicit IncompleteCholesky(const CsrMatrix& A) { refactor(A); }
    /// Recompute the factor for new values on the same pattern.
    void refactor(const CsrMatrix& A);
    void apply(std::span<const double> r, std::span<double> z) const override;

  private:
    bool try_factor(const CsrMatrix& A, double shift);
    std::shared_ptr<const CsrPattern> pattern_;
    std::vector<int> lower_ptr_;  // per row: one past the last col <= row
    std::vector<double> lvals_;   // factor values on the lower pattern entries
};

/// Zero-fill incomplete LU preconditioner for the mildly nonsymmetric
/// one-field systems.
class IncompleteLU final : public LinearOperator {
  public:
    explicit IncompleteLU(const CsrMatrix& A) { refactor(A); }
    void refactor(const CsrMatrix& A);
    void apply(std::span<const double> r, std::span<double> z) const override;

  private:
    std::shared_ptr<const CsrPattern> pattern_;
    std::vector<int> diag_;
    std::vector<double> vals_;
};

/// Exact SPD solve through a sparse Cholesky factorization computed once;
/// serves as the Schur-complement preconditioner in the pressure step.
class CholeskyOperator final : public LinearOperator {
  public:
    explicit CholeskyOperator(const CsrMatrix& A);
    ~CholeskyOperator() override;
    CholeskyOperator(CholeskyOperator&&) noexcept;
    CholeskyOperator& operator=(CholeskyOperator&&) noexcept;
    void apply(std::span<const double> r, std::span<double> z) const override;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Preconditioned conjugate gradients for SPD operators. Stops when
/// ||Ax-b|| <= tol * ||b|| (absolute when b = 0). Deterministic.
/// residual_history, when given, receives ||r|| after each iteration.
SolverReport pcg(const CsrMatrix& A, std::span<const double> b, const LinearOperator& precond,
                 std::span<double> x, double tol, int max_iters,
                 std::vector<double>* residual_history = nullptr);

/// BiCGStab for the mildly nonsymmetric one-field systems; same contract as pcg.
SolverReport bicgstab(const CsrMatrix& A, std::span<const double> b, const LinearOperator& precond,
                      std::span<double> x, double tol, int max_iters);

struct DegenerateStokesOptions {
    double inner_tol = 1e-12;          // inner mass-solve (CG) relative tolerance
    int inner_max_iters = 2000;
    int max_outer = 2000;
    int pinned_pressure_dof = 0;       // gauge: this pressure dof is fixed to 0
    const std::vector<char>* constrained_vel = nullptr; // velocity Dirichlet mask
    const LinearOperator* schur_precond = nullptr;      // e.g. pressure-stiffness solve
    const LinearOperator* mass_precond = nullptr;       // inner CG preconditioner (default Jacobi)
    std::span<const double> p_warm = {};                // warm start for the pressure
};

struct StokesSolution {
    std::vector<double> u;
    std::vector<double> p;
    SolverReport report;
};

/// Pressure projection ("degenerate" Stokes):
///   M (u - u_star)/dt + B^T p = 0,  B u = 0,
/// solved via the Schur complement S = B M^-1 B^T with outer CG and inner
/// mass solves by CG. M must already carry identity rows/columns for any
/// Dirichlet-constrained velocity dofs (u_star is assumed to satisfy them).
/// Convergence: ||B u|| <= tol * ||u_star||_M over the non-gauge pressure rows.
StokesSolution solve_degenerate_stokes(const CsrMatrix& M, const CsrMatrix& B,
                                       std::span<const double> u_star, double dt, double tol,
                                       const DegenerateStokesOptions& opts = {});

/// Dense LU fallback for systems up to 2000 dofs; test oracle only.
std::vector<double> dense_solve(const CsrMatrix& A, std::span<const double> b);

// Small dense vector helpers shared by the solvers.
double vec_dot(std::span<const double> a, std::span<const double> b);
double vec_norm(std::span<const double> a);
void vec_axpy(double alpha, std::span<const double> x, std::span<double> y); // y += alpha x
bool vec_finite(std::span<const double> a);

} // namespace fsim
