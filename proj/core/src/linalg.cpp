#include "fsim/linalg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "fsim/errors.hpp"

namespace fsim {

struct CholeskyOperator::Impl {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
};

CholeskyOperator::CholeskyOperator(const CsrMatrix& A) : impl_(std::make_unique<Impl>()) {
    const int n = A.rows();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(A.pattern->nnz());
    for (int r = 0; r < n; ++r)
        for (int k = A.pattern->row_ptr[r]; k < A.pattern->row_ptr[r + 1]; ++k)
            trips.emplace_back(r, A.pattern->col_idx[k], A.values[k]);
    Eigen::SparseMatrix<double> S(n, A.cols());
    S.setFromTriplets(trips.begin(), trips.end());
    impl_->llt.compute(S);
    if (impl_->llt.info() != Eigen::Success)
        throw std::invalid_argument("CholeskyOperator: factorization failed (matrix not SPD?)");
}

CholeskyOperator::~CholeskyOperator() = default;
CholeskyOperator::CholeskyOperator(CholeskyOperator&&) noexcept = default;
CholeskyOperator& CholeskyOperator::operator=(CholeskyOperator&&) noexcept = default;

void CholeskyOperator::apply(std::span<const double> r, std::span<double> z) const {
    Eigen::Map<const Eigen::VectorXd> rv(r.data(), r.size());
    Eigen::Map<Eigen::VectorXd> zv(z.data(), z.size());
    zv = impl_->llt.solve(rv);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

} // namespace

double vec_dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double vec_norm(std::span<const double> a) { return std::sqrt(vec_dot(a, a)); }

void vec_axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

bool vec_finite(std::span<const double> a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

void IdentityPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
    std::copy(r.begin(), r.end(), z.begin());
}

bool IncompleteCholesky::try_factor(const CsrMatrix& A, double shift) {
    const auto& p = *pattern_;
    const int n = p.rows;
    lvals_.assign(p.nnz(), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int ki = p.row_ptr[i]; ki < lower_ptr_[i]; ++ki) {
            const int j = p.col_idx[ki];
            double s = A.values[ki];
            if (i == j) s += shift * A.values[ki];
            // subtract sum_{k<j} L(i,k) L(j,k): merge-walk the two sorted rows
            int a = p.row_ptr[i], b = p.row_ptr[j];
            while (a < lower_ptr_[i] && b < lower_ptr_[j]) {
                const int ca = p.col_idx[a], cb = p.col_idx[b];
                if (ca >= j || cb >= j) break;
                if (ca == cb) {
                    s -= lvals_[a] * lvals_[b];
                    ++a;
                    ++b;
                } else if (ca < cb) {
                    ++a;
                } else {
                    ++b;
                }
            }
            if (j < i) {
                const double d = lvals_[lower_ptr_[j] - 1]; // L(j,j) is last in row j's lower part
                lvals_[ki] = s / d;
            } else {
                if (s <= 0.0) return false;
                lvals_[ki] = std::sqrt(s);
            }
        }
    }
    return true;
}

void IncompleteCholesky::refactor(const CsrMatrix& A) {
    if (A.pattern != pattern_) {
        pattern_ = A.pattern;
        const auto& p = *pattern_;
        lower_ptr_.resize(p.rows);
        for (int i = 0; i < p.rows; ++i) {
            int k = p.row_ptr[i];
            while (k < p.row_ptr[i + 1] && p.col_idx[k] <= i) ++k;
            lower_ptr_[i] = k;
            if (k == p.row_ptr[i] || p.col_idx[k - 1] != i)
                throw std::invalid_argument("IncompleteCholesky: missing diagonal entry");
        }
    }
    for (double shift = 0.0; shift <= 1.0; shift = (shift == 0.0 ? 1e-3 : shift * 10.0)) {
        if (try_factor(A, shift)) return;
    }
    throw std::invalid_argument("IncompleteCholesky: factorization failed");
}

void IncompleteCholesky::apply(std::span<const double> r, std::span<double> z) const {
    const auto& p = *pattern_;
    const int n = p.rows;
    // forward solve L y = r
    for (int i = 0; i < n; ++i) {
        double s = r[i];
        int k = p.row_ptr[i];
        for (; k < lower_ptr_[i] - 1; ++k) s -= lvals_[k] * z[p.col_idx[k]];
        z[i] = s / lvals_[lower_ptr_[i] - 1];
    }
    // backward solve L^T z = y
    for (int i = n - 1; i >= 0; --i) {
        const double zi = z[i] / lvals_[lower_ptr_[i] - 1];
        z[i] = zi;
        for (int k = p.row_ptr[i]; k < lower_ptr_[i] - 1; ++k) z[p.col_idx[k]] -= lvals_[k] * zi;
    }
}

void IncompleteLU::refactor(const CsrMatrix& A) {
    if (A.pattern != pattern_) {
        pattern_ = A.pattern;
        const auto& p = *pattern_;
        diag_.resize(p.rows);
        for (int i = 0; i < p.rows; ++i) {
            const int k = p.find(i, i);
            if (k < 0) throw std::invalid_argument("IncompleteLU: missing diagonal entry");
            diag_[i] = k;
        }
    }
    const auto& p = *pattern_;
    vals_ = A.values;
    for (int i = 0; i < p.rows; ++i) {
        for (int ki = p.row_ptr[i]; ki < p.row_ptr[i + 1]; ++ki) {
            const int k = p.col_idx[ki];
            if (k >= i) break;
            const double piv = vals_[diag_[k]];
            const double lik = vals_[ki] / piv;
            vals_[ki] = lik;
            // row_i(j > k) -= lik * row_k(j > k) on the shared pattern
            int a = ki + 1, b = diag_[k] + 1;
            const int a_end = p.row_ptr[i + 1], b_end = p.row_ptr[k + 1];
            while (a < a_end && b < b_end) {
                const int ca = p.col_idx[a], cb = p.col_idx[b];
                if (ca == cb) {
                    vals_[a] -= lik * vals_[b];
                    ++a;
                    ++b;
                } else if (ca < cb) {
                    ++a;
                } else {
                    ++b;
                }
            }
        }
        if (vals_[diag_[i]] == 0.0) vals_[diag_[i]] = 1e-300; // keep the solve defined
    }
}

void IncompleteLU::apply(std::span<const double> r, std::span<double> z) const {
    const auto& p = *pattern_;
    const int n = p.rows;
    for (int i = 0; i < n; ++i) {
        double s = r[i];
        for (int k = p.row_ptr[i]; p.col_idx[k] < i; ++k) s -= vals_[k] * z[p.col_idx[k]];
        z[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = z[i];
        for (int k = p.row_ptr[i + 1] - 1; p.col_idx[k] > i; --k) s -= vals_[k] * z[p.col_idx[k]];
        z[i] = s / vals_[diag_[i]];
    }
}

JacobiPreconditioner::JacobiPreconditioner(const CsrMatrix& A) {
    const int n = A.rows();
    inv_diag_.resize(n);
    for (int i = 0; i < n; ++i) {
        const double d = A.at(i, i);
        if (d <= 0.0)
            throw std::invalid_argument("jacobi_preconditioner: nonpositive diagonal entry");
        inv_diag_[i] = 1.0 / d;
    }
}

void JacobiPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
    for (std::size_t i = 0; i < r.size(); ++i) z[i] = inv_diag_[i] * r[i];
}

SolverReport pcg(const CsrMatrix& A, std::span<const double> b, const LinearOperator& precond,
                 std::span<double> x, double tol, int max_iters,
                 std::vector<double>* residual_history) {
    const auto t0 = Clock::now();
    const int n = A.rows();
    SolverReport report;

    const double bnorm = vec_norm(b);
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        report.converged = true;
        report.wall_time = seconds_since(t0);
        return report;
    }
    const double target = tol * bnorm;

    std::vector<double> r(n), z(n), p(n), Ap(n);
    matvec(A, x, r);
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
    double rnorm = vec_norm(r);
    if (rnorm <= target) {
        report.converged = true;
        report.final_residual = rnorm / bnorm;
        report.wall_time = seconds_since(t0);
        return report;
    }

    precond.apply(r, z);
    std::copy(z.begin(), z.end(), p.begin());
    double rz = vec_dot(r, z);

    for (int it = 1; it <= max_iters; ++it) {
        matvec(A, p, Ap);
        const double pAp = vec_dot(p, Ap);
        if (pAp <= 0.0) break; // lost positive definiteness (or exact zero direction)
        const double alpha = rz / pAp;
        vec_axpy(alpha, p, x);
        vec_axpy(-alpha, Ap, r);
        rnorm = vec_norm(r);
        report.iterations = it;
        if (residual_history) residual_history->push_back(rnorm);
        if (rnorm <= target || !std::isfinite(rnorm)) break;
        precond.apply(r, z);
        const double rz_new = vec_dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }

    report.final_residual = rnorm / bnorm;
    report.converged = std::isfinite(rnorm) && rnorm <= target;
    report.wall_time = seconds_since(t0);
    return report;
}

SolverReport bicgstab(const CsrMatrix& A, std::span<const double> b, const LinearOperator& precond,
                      std::span<double> x, double tol, int max_iters) {
    const auto t0 = Clock::now();
    const int n = A.rows();
    SolverReport report;

    const double bnorm = vec_norm(b);
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        report.converged = true;
        report.wall_time = seconds_since(t0);
        return report;
    }
    const double target = tol * bnorm;

    std::vector<double> r(n), r0(n), p(n), v(n), s(n), t(n), y(n), z(n);
    matvec(A, x, r);
    for (int i = 0; i < n; ++i) r[i] = b[i] - r[i];
    double rnorm = vec_norm(r);
    if (rnorm <= target) {
        report.converged = true;
        report.final_residual = rnorm / bnorm;
        report.wall_time = seconds_since(t0);
        return report;
    }
    std::copy(r.begin(), r.end(), r0.begin());
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    std::fill(p.begin(), p.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);

    for (int it = 1; it <= max_iters; ++it) {
        const double rho_new = vec_dot(r0, r);
        if (rho_new == 0.0) break;
        const double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (int i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        precond.apply(p, y);
        matvec(A, y, v);
        const double r0v = vec_dot(r0, v);
        if (r0v == 0.0) break;
        alpha = rho / r0v;
        for (int i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        report.iterations = it;
        if (vec_norm(s) <= target) {
            vec_axpy(alpha, y, x);
            rnorm = vec_norm(s);
            break;
        }
        precond.apply(s, z);
        matvec(A, z, t);
        const double tt = vec_dot(t, t);
        if (tt == 0.0) break;
        omega = vec_dot(t, s) / tt;
        for (int i = 0; i < n; ++i) x[i] += alpha * y[i] + omega * z[i];
        for (int i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
        rnorm = vec_norm(r);
        if (rnorm <= target || !std::isfinite(rnorm) || omega == 0.0) break;
    }

    report.final_residual = rnorm / bnorm;
    report.converged = std::isfinite(rnorm) && rnorm <= target;
    report.wall_time = seconds_since(t0);
    return report;
}

StokesSolution solve_degenerate_stokes(const CsrMatrix& M, const CsrMatrix& B,
                                       std::span<const double> u_star, double dt, double tol,
                                       const DegenerateStokesOptions& opts) {
    const auto t0 = Clock::now();
    const int nu = M.rows();
    const int np = B.rows();
    const int pin = opts.pinned_pressure_dof;

    StokesSolution sol;
    sol.u.assign(u_star.begin(), u_star.end());
    sol.p.assign(np, 0.0);

    std::unique_ptr<JacobiPreconditioner> default_precond;
    if (!opts.mass_precond) default_precond = std::make_unique<JacobiPreconditioner>(M);
    const LinearOperator& mass_precond = opts.mass_precond ? *opts.mass_precond : *default_precond;
    std::vector<double> Mu(nu);
    matvec(M, u_star, Mu);
    // M carries identity rows for constrained dofs; measure the norm over the
    // free dofs so the tolerance tracks the physical field.
    double m_sq = 0.0;
    for (int i = 0; i < nu; ++i)
        if (!opts.constrained_vel || !(*opts.constrained_vel)[i]) m_sq += u_star[i] * Mu[i];
    const double ustar_m_norm = std::sqrt(std::max(0.0, m_sq));

    // u_star == 0: nothing to project.
    if (ustar_m_norm == 0.0 && vec_norm(u_star) == 0.0) {
        sol.report.converged = true;
        sol.report.wall_time = seconds_since(t0);
        return sol;
    }

    const auto mask_vel = [&](std::vector<double>& v) {
        if (!opts.constrained_vel) return;
        const auto& m = *opts.constrained_vel;
        for (int i = 0; i < nu; ++i)
            if (m[i]) v[i] = 0.0;
    };

    std::vector<double> bt(nu), minv_bt(nu), sp(np);
    int inner_iterations = 0;
    // S p = B M^-1 B^T p on the subspace {p[pin] = 0}; the pinned row is identity.
    const auto apply_schur = [&](std::span<const double> p_in, std::span<double> out) {
        std::vector<double> pv(p_in.begin(), p_in.end());
        const double pinned = pv[pin];
        pv[pin] = 0.0;
        std::fill(bt.begin(), bt.end(), 0.0);
        // bt = B^T pv with constrained velocity columns removed
        for (int q = 0; q < np; ++q) {
            const double pq = pv[q];
            if (pq == 0.0) continue;
            const auto& pat = *B.pattern;
            for (int k = pat.row_ptr[q]; k < pat.row_ptr[q + 1]; ++k)
                bt[pat.col_idx[k]] += B.values[k] * pq;
        }
        mask_vel(bt);
        std::fill(minv_bt.begin(), minv_bt.end(), 0.0);
        const auto rep = pcg(M, bt, mass_precond, minv_bt, opts.inner_tol, opts.inner_max_iters);
        inner_iterations += rep.iterations;
        if (!rep.converged)
            throw SolverFailure("degenerate Stokes inner mass solve", rep.final_residual,
                                rep.iterations);
        matvec(B, minv_bt, out);
        out[pin] = pinned;
    };

    // Right-hand side: B u_star / dt, pinned entry zeroed.
    std::vector<double> rhs_p(np);
    matvec(B, u_star, rhs_p);
    for (double& v : rhs_p) v /= dt;
    rhs_p[pin] = 0.0;

    // ||B u|| = dt * ||outer residual||, so the outer target enforces the contract.
    const double target = tol * std::max(ustar_m_norm, 1e-300) / dt;

    if (!opts.p_warm.empty()) {
        std::copy(opts.p_warm.begin(), opts.p_warm.end(), sol.p.begin());
        sol.p[pin] = 0.0;
    }

    // Outer CG on the Schur complement.
    std::vector<double> r(np), z(np), pdir(np), Sp(np);
    apply_schur(sol.p, Sp);
    for (int q = 0; q < np; ++q) r[q] = rhs_p[q] - Sp[q];
    double rnorm = vec_norm(r);
    int outer = 0;
    const auto precondition = [&](std::span<const double> rin, std::span<double> zout) {
        if (opts.schur_precond) {
            opts.schur_precond->apply(rin, zout);
            zout[pin] = 0.0;
        } else {
            std::copy(rin.begin(), rin.end(), zout.begin());
        }
    };

    if (rnorm > target) {
        precondition(r, z);
        std::copy(z.begin(), z.end(), pdir.begin());
        double rz = vec_dot(r, z);
        for (outer = 1; outer <= opts.max_outer; ++outer) {
            apply_schur(pdir, Sp);
            const double pSp = vec_dot(pdir, Sp);
            if (pSp <= 0.0) break;
            const double alpha = rz / pSp;
            vec_axpy(alpha, pdir, sol.p);
            vec_axpy(-alpha, Sp, r);
            rnorm = vec_norm(r);
            if (rnorm <= target || !std::isfinite(rnorm)) break;
            precondition(r, z);
            const double rz_new = vec_dot(r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (int q = 0; q < np; ++q) pdir[q] = z[q] + beta * pdir[q];
        }
    }
    sol.p[pin] = 0.0;

    // Recover u = u_star - dt M^-1 B^T p.
    std::fill(bt.begin(), bt.end(), 0.0);
    {
        const auto& pat = *B.pattern;
        for (int q = 0; q < np; ++q) {
            const double pq = sol.p[q];
            if (pq == 0.0) continue;
            for (int k = pat.row_ptr[q]; k < pat.row_ptr[q + 1]; ++k)
                bt[pat.col_idx[k]] += B.values[k] * pq;
        }
    }
    mask_vel(bt);
    std::fill(minv_bt.begin(), minv_bt.end(), 0.0);
    const auto rep = pcg(M, bt, mass_precond, minv_bt, opts.inner_tol, opts.inner_max_iters);
    if (!rep.converged)
        throw SolverFailure("degenerate Stokes final mass solve", rep.final_residual,
                            rep.iterations);
    for (int i = 0; i < nu; ++i) sol.u[i] = u_star[i] - dt * minv_bt[i];

    std::vector<double> Bu(np);
    matvec(B, sol.u, Bu);
    // The gauge row is not part of the pinned system; its entry only reflects
    // the compatibility of the data, not the solve.
    Bu[pin] = 0.0;
    const double div_norm = vec_norm(Bu);
    sol.report.iterations = outer;
    sol.report.final_residual = div_norm;
    sol.report.converged = std::isfinite(div_norm) && div_norm <= tol * std::max(ustar_m_norm, 1e-300);
    sol.report.wall_time = seconds_since(t0);
    return sol;
}

std::vector<double> dense_solve(const CsrMatrix& A, std::span<const double> b) {
    const int n = A.rows();
    if (n > 2000) throw std::invalid_argument("dense_solve: system larger than 2000 dofs");
    if (A.cols() != n || static_cast<int>(b.size()) != n)
        throw std::invalid_argument("dense_solve: dimension mismatch");
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    const auto& pat = *A.pattern;
    for (int r = 0; r < n; ++r)
        for (int k = pat.row_ptr[r]; k < pat.row_ptr[r + 1]; ++k)
            D(r, pat.col_idx[k]) += A.values[k];
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) rhs(i) = b[i];
    Eigen::VectorXd x = D.partialPivLu().solve(rhs);
    return std::vector<double>(x.data(), x.data() + n);
}

} // namespace fsim
