#include "fsim/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fsim/errors.hpp"

namespace fsim {

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::explicit_ifem: return "explicit-ifem";
        case Scheme::implicit_ifem: return "implicit-ifem";
        case Scheme::one_field_fdm: return "one-field-fdm";
    }
    return "unknown";
}

std::optional<Scheme> scheme_from_string(const std::string& name) {
    if (name == "explicit-ifem") return Scheme::explicit_ifem;
    if (name == "implicit-ifem") return Scheme::implicit_ifem;
    if (name == "one-field-fdm") return Scheme::one_field_fdm;
    return std::nullopt;
}

void SchemeConfig::validate() const {
    if (re <= 0.0) throw std::invalid_argument("SchemeConfig: re must be positive");
    if (dt <= 0.0) throw std::invalid_argument("SchemeConfig: dt must be positive");
    if (t_end < 0.0) throw std::invalid_argument("SchemeConfig: t_end must be nonnegative");
    if (rho_r <= 0.0) throw std::invalid_argument("SchemeConfig: rho_r must be positive");
    if (mu_r <= 0.0) throw std::invalid_argument("SchemeConfig: mu_r must be positive");
    if (c1_tilde < 0.0) throw std::invalid_argument("SchemeConfig: c1_tilde must be nonnegative");
    if (fr < 0.0) throw std::invalid_argument("SchemeConfig: fr must be nonnegative");
    if (fp_tol <= 0.0) throw std::invalid_argument("SchemeConfig: fp_tol must be positive");
    if (fp_max_iters < 1) throw std::invalid_argument("SchemeConfig: fp_max_iters must be >= 1");
    if (lin_tol <= 0.0) throw std::invalid_argument("SchemeConfig: lin_tol must be positive");
    if (pressure_tol <= 0.0)
        throw std::invalid_argument("SchemeConfig: pressure_tol must be positive");
}

SchemeConfig nondimensionalize(const PhysicalParams& p) {
    if (p.rho_f <= 0.0 || p.mu_f <= 0.0 || p.length <= 0.0 || p.velocity <= 0.0)
        throw std::invalid_argument("nondimensionalize: rho_f, mu_f, length, velocity must be positive");
    if (p.rho_s <= 0.0 || p.mu_s <= 0.0)
        throw std::invalid_argument("nondimensionalize: rho_s, mu_s must be positive");
    if (p.gravity < 0.0) throw std::invalid_argument("nondimensionalize: |g| must be nonnegative");
    SchemeConfig cfg;
    cfg.re = p.rho_f * p.velocity * p.length / p.mu_f;
    cfg.rho_r = p.rho_s / p.rho_f;
    cfg.mu_r = p.mu_s / p.mu_f;
    cfg.c1_tilde = p.c1 / (p.rho_f * p.velocity * p.velocity);
    cfg.fr = p.gravity * p.length / (p.velocity * p.velocity);
    return cfg;
}

Simulator::Simulator(BackgroundMesh bg, SolidMesh solid, SchemeConfig cfg, DirichletBC bc)
    : bg_(std::move(bg)), cfg_(cfg), bc_(std::move(bc)) {
    cfg_.validate();
    const double gnorm = norm(cfg_.g_dir);
    if (cfg_.fr > 0.0 && gnorm == 0.0)
        throw std::invalid_argument("Simulator: Fr > 0 requires a gravity direction");
    if (gnorm > 0.0) cfg_.g_dir = (1.0 / gnorm) * cfg_.g_dir;

    std::sort(bc_.dofs.begin(), bc_.dofs.end());
    bc_.dofs.erase(std::unique(bc_.dofs.begin(), bc_.dofs.end()), bc_.dofs.end());
    for (int d : bc_.dofs)
        if (d < 0 || d >= bg_.n_vel_dofs())
            throw std::invalid_argument("Simulator: Dirichlet dof outside the mesh");

    vp_ = build_velocity_pattern(bg_);
    sp_ = build_scalar_pattern(bg_);
    M_ = assemble_mass(bg_);
    K_ = assemble_diffusion(bg_, 1.0 / (2.0 * cfg_.re));
    B_ = assemble_divergence(bg_);

    base_ = CsrMatrix(vp_.pattern);
    scatter_into(M_, base_, 1.0 / cfg_.dt);
    scatter_into(K_, base_, 1.0);

    ifem_dirichlet_ = DirichletSet(vp_.pattern, bc_.dofs);
    fdm_dirichlet_ = DirichletSet(vp_.pattern, bc_.dofs);
    ifem_matrix_ = base_;
    ifem_dirichlet_.eliminate(ifem_matrix_);
    ifem_precond_ = std::make_unique<IncompleteCholesky>(ifem_matrix_);

    mass_constrained_ = M_;
    DirichletSet mass_set(M_.pattern, bc_.dofs);
    mass_set.eliminate(mass_constrained_);
    mass_precond_ = std::make_unique<IncompleteCholesky>(mass_constrained_);
    vel_mask_.assign(bg_.n_vel_dofs(), 0);
    for (int d : bc_.dofs) vel_mask_[d] = 1;

    CsrMatrix Ap = assemble_pressure_stiffness(bg_);
    DirichletSet pin_set(Ap.pattern, {0});
    pin_set.eliminate(Ap);
    schur_precond_ = std::make_unique<CholeskyOperator>(Ap);

    // Per-component Dirichlet node lists for the scalar convection solves.
    for (int d : bc_.dofs) {
        const int c = d % 2;
        scalar_value_pos_[c].push_back(
            std::lower_bound(bc_.dofs.begin(), bc_.dofs.end(), d) - bc_.dofs.begin());
    }
    std::vector<int> nodes_c[2];
    for (int d : bc_.dofs) nodes_c[d % 2].push_back(d / 2);
    for (int c = 0; c < 2; ++c) scalar_dirichlet_[c] = DirichletSet(sp_.pattern, nodes_c[c]);

    grav_rhs_.assign(bg_.n_vel_dofs(), 0.0);
    if (cfg_.fr > 0.0) {
        const auto load = assemble_load(bg_);
        for (int n = 0; n < bg_.n_vel_nodes(); ++n) {
            grav_rhs_[2 * n] = cfg_.fr * cfg_.g_dir.x * load[n];
            grav_rhs_[2 * n + 1] = cfg_.fr * cfg_.g_dir.y * load[n];
        }
    }

    state_.u.assign(bg_.n_vel_dofs(), 0.0);
    state_.u_prev.assign(bg_.n_vel_dofs(), 0.0);
    state_.p.assign(bg_.n_pres_nodes(), 0.0);
    state_.solid = std::move(solid);
    state_.qmap = build_transfer_map(bg_, state_.solid, triangle_3pt());
    state_.nmap = build_nodal_map(bg_, state_.solid);
    state_.solid_state.reset(state_.qmap.size());
    for (int k = 0; k < state_.qmap.size(); ++k)
        state_.solid_state.grad_u[k] = interp_gradient(state_.qmap.records[k], state_.u);
}

void Simulator::set_time_step(double dt) {
    if (dt <= 0.0) throw std::invalid_argument("set_time_step: dt must be positive");
    cfg_.dt = dt;
    base_.set_zero();
    scatter_into(M_, base_, 1.0 / cfg_.dt);
    scatter_into(K_, base_, 1.0);
    ifem_matrix_ = base_;
    ifem_dirichlet_.eliminate(ifem_matrix_);
    ifem_precond_ = std::make_unique<IncompleteCholesky>(ifem_matrix_);
}

std::vector<double> Simulator::boundary_values(double t) const {
    std::vector<double> values(bc_.dofs.size(), 0.0);
    if (bc_.eval) bc_.eval(t, bc_.dofs, values);
    return values;
}

void Simulator::check_finite(std::span<const double> v, const char* substep) const {
    if (!vec_finite(v)) throw DivergenceError(substep);
}

std::vector<double> Simulator::convection_step() {
    const double t_new = state_.t + cfg_.dt;
    const auto bcv = boundary_values(t_new);
    const auto eb = element_basis(bg_);
    const int nvn = bg_.n_vel_nodes();
    const double dt = cfg_.dt;

    // Least-squares form of (u - u_n)/dt + (u_n . grad) u = 0: test and trial
    // functions are streamline-augmented, p_i = phi_i + dt u_n . grad phi_i.
    CsrMatrix A(sp_.pattern);
    std::vector<double> rhs_x(nvn, 0.0), rhs_y(nvn, 0.0);
    for (int e = 0; e < bg_.n_elements(); ++e) {
        const auto& conn = bg_.vel_conn[e];
        double ax[9], ay[9];
        for (int i = 0; i < 9; ++i) {
            ax[i] = state_.u[2 * conn[i]];
            ay[i] = state_.u[2 * conn[i] + 1];
        }
        const auto& idx = sp_.elem_idx[e];
        for (int q = 0; q < 9; ++q) {
            const auto& phi = eb.phi[q];
            const auto& grad = eb.grad[q];
            double a0 = 0.0, a1 = 0.0;
            for (int i = 0; i < 9; ++i) {
                a0 += phi[i] * ax[i];
                a1 += phi[i] * ay[i];
            }
            double p[9];
            for (int i = 0; i < 9; ++i) p[i] = phi[i] + dt * (a0 * grad[i].x + a1 * grad[i].y);
            const double w = eb.w[q];
            for (int i = 0; i < 9; ++i) {
                const double wp = w * p[i];
                rhs_x[conn[i]] += wp * a0;
                rhs_y[conn[i]] += wp * a1;
                for (int j = 0; j < 9; ++j) A.values[idx[9 * i + j]] += wp * p[j];
            }
        }
    }

    std::vector<double> u_third(bg_.n_vel_dofs());
    SolverReport reports[2];
    for (int c = 0; c < 2; ++c) {
        CsrMatrix Ac;
        if (c == 0)
            Ac = A; // keep the assembled values for the second component
        else
            Ac = std::move(A);
        scalar_dirichlet_[c].eliminate(Ac);
        std::vector<double> values(scalar_value_pos_[c].size());
        for (std::size_t i = 0; i < values.size(); ++i) values[i] = bcv[scalar_value_pos_[c][i]];
        auto& rhs = (c == 0) ? rhs_x : rhs_y;
        scalar_dirichlet_[c].correct_rhs(rhs, values);
        std::vector<double> x(nvn);
        for (int n = 0; n < nvn; ++n) x[n] = state_.u[2 * n + c];
        const auto& dofs = scalar_dirichlet_[c].dofs();
        for (std::size_t i = 0; i < dofs.size(); ++i) x[dofs[i]] = values[i];
        JacobiPreconditioner pc(Ac);
        reports[c] = pcg(Ac, rhs, pc, x, cfg_.lin_tol, cfg_.lin_max_iters);
        if (!reports[c].converged)
            throw SolverFailure("convection step", reports[c].final_residual,
                                reports[c].iterations);
        for (int n = 0; n < nvn; ++n) u_third[2 * n + c] = x[n];
    }
    last_convection_ = reports[0];
    last_convection_.iterations += reports[1].iterations;
    last_convection_.final_residual = std::max(reports[0].final_residual, reports[1].final_residual);
    last_convection_.wall_time += reports[1].wall_time;

    check_finite(u_third, "convection");
    return u_third;
}

std::vector<double> Simulator::diffusion_rhs_base(const std::vector<double>& u_third) const {
    std::vector<double> rhs(bg_.n_vel_dofs());
    matvec(M_, u_third, rhs);
    const double inv_dt = 1.0 / cfg_.dt;
    for (double& v : rhs) v *= inv_dt;
    if (cfg_.fr > 0.0) {
        vec_axpy(1.0, grav_rhs_, rhs);
        const auto solid_grav = assemble_solid_constant_load(
            state_.qmap, state_.solid, cfg_.g_dir, cfg_.fr * (cfg_.rho_r - 1.0));
        vec_axpy(1.0, solid_grav, rhs);
    }
    return rhs;
}

std::vector<double> Simulator::solve_diffusion_system(const CsrMatrix& A,
                                                      const LinearOperator& pc,
                                                      DirichletSet& dset, std::vector<double> rhs,
                                                      std::span<const double> bc_values,
                                                      bool symmetric, const char* what) {
    dset.correct_rhs(rhs, bc_values);
    std::vector<double> x = state_.u; // warm start
    const auto& dofs = dset.dofs();
    for (std::size_t i = 0; i < dofs.size(); ++i) x[dofs[i]] = bc_values[i];
    const SolverReport rep = symmetric ? pcg(A, rhs, pc, x, cfg_.lin_tol, cfg_.lin_max_iters)
                                       : bicgstab(A, rhs, pc, x, cfg_.lin_tol, cfg_.lin_max_iters);
    last_diffusion_ = rep;
    if (!rep.converged) throw SolverFailure(what, rep.final_residual, rep.iterations);
    check_finite(x, what);
    return x;
}

std::vector<double> Simulator::diffusion_step_explicit(const std::vector<double>& u_third) {
    const auto bcv = boundary_values(state_.t + cfg_.dt);
    auto rhs = diffusion_rhs_base(u_third);
    // Temporal term from the previous two steps; viscous and elastic parts at u_{n+1/3}.
    const auto force = assemble_fsi_force(state_.qmap, state_.solid, state_.solid_state, u_third,
                                          state_.u, cfg_.fsi(), cfg_.dt,
                                          TemporalPair{state_.u, state_.u_prev});
    vec_axpy(-1.0, force, rhs);
    return solve_diffusion_system(ifem_matrix_, *ifem_precond_, ifem_dirichlet_, std::move(rhs),
                                  bcv, true, "diffusion (explicit forcing)");
}

std::vector<double> Simulator::diffusion_step_implicit(const std::vector<double>& u_third,
                                                       int* fp_iterations) {
    const auto bcv = boundary_values(state_.t + cfg_.dt);
    const auto rhs_base = diffusion_rhs_base(u_third);

    std::vector<double> u_k = u_third;
    std::vector<Vec2> nodal_prev;
    double err = 0.0;
    for (int k = 0; k <= cfg_.fp_max_iters; ++k) {
        const auto force = assemble_fsi_force(state_.qmap, state_.solid, state_.solid_state, u_k,
                                              state_.u, cfg_.fsi(), cfg_.dt);
        auto rhs = rhs_base;
        vec_axpy(-1.0, force, rhs);
        std::vector<double> u_next;
        try {
            u_next = solve_diffusion_system(ifem_matrix_, *ifem_precond_, ifem_dirichlet_,
                                            std::move(rhs), bcv, true,
                                            "diffusion (implicit forcing)");
        } catch (const DivergenceError&) {
            // The fixed point blew up; report it as non-convergence, which is
            // how the breakdowns show up in the experiments.
            throw FixedPointFailure(std::numeric_limits<double>::infinity(), k);
        }
        const auto nodal = solid_node_velocities(u_next);
        if (k > 0) {
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < nodal.size(); ++i) {
                const Vec2 d = nodal[i] - nodal_prev[i];
                num += dot(d, d);
                den += dot(nodal_prev[i], nodal_prev[i]);
            }
            num = std::sqrt(num);
            den = std::sqrt(den);
            err = (num == 0.0) ? 0.0 : num / std::max(den, 1e-300);
            if (!std::isfinite(err)) throw FixedPointFailure(err, k);
            // Iterates that agree to within the linear-solver noise cannot be
            // improved further; the relative criterion is unreadable below
            // that scale (e.g. while the flow has not yet reached the solid).
            const double noise = 10.0 * cfg_.lin_tol * vec_norm(u_next);
            if (err < cfg_.fp_tol || num <= noise) {
                if (fp_iterations) *fp_iterations = k;
                return u_next;
            }
        }
        nodal_prev = nodal;
        u_k = std::move(u_next);
    }
    throw FixedPointFailure(err, cfg_.fp_max_iters);
}

std::vector<double> Simulator::diffusion_step_fdm(const std::vector<double>& u_third) {
    const auto bcv = boundary_values(state_.t + cfg_.dt);
    CsrMatrix A = base_;
    const double max_z = add_fdm_lhs(state_.qmap, state_.solid, state_.solid_state, cfg_.fsi(),
                                     cfg_.dt, vp_, A);
    fdm_dirichlet_.eliminate(A);

    auto rhs = diffusion_rhs_base(u_third);
    const auto fdm_rhs = assemble_fdm_rhs(state_.qmap, state_.solid, state_.solid_state,
                                          cfg_.fsi(), cfg_.dt);
    vec_axpy(1.0, fdm_rhs, rhs);
    if (cfg_.rho_r != 1.0) {
        const auto hist = assemble_solid_velocity_load(state_.qmap, state_.solid, state_.u,
                                                       (cfg_.rho_r - 1.0) / cfg_.dt);
        vec_axpy(1.0, hist, rhs);
    }

    // The D1/D3 blocks are the only asymmetric contributions; they vanish
    // exactly when Z == 0 and the system stays CG-solvable.
    const bool symmetric = (max_z == 0.0);
    // The solid moves a fraction of an element per step, so a factorization
    // stays an effective preconditioner for several steps.
    constexpr int refactor_period = 8;
    const LinearOperator* pc;
    if (symmetric) {
        if (!fdm_ic_) {
            fdm_ic_ = std::make_unique<IncompleteCholesky>(A);
            fdm_ic_step_ = state_.step;
        } else if (state_.step - fdm_ic_step_ >= refactor_period) {
            fdm_ic_->refactor(A);
            fdm_ic_step_ = state_.step;
        }
        pc = fdm_ic_.get();
    } else {
        if (!fdm_ilu_) {
            fdm_ilu_ = std::make_unique<IncompleteLU>(A);
            fdm_ilu_step_ = state_.step;
        } else if (state_.step - fdm_ilu_step_ >= refactor_period) {
            fdm_ilu_->refactor(A);
            fdm_ilu_step_ = state_.step;
        }
        pc = fdm_ilu_.get();
    }
    return solve_diffusion_system(A, *pc, fdm_dirichlet_, std::move(rhs), bcv, symmetric,
                                  "diffusion (one-field)");
}

std::pair<std::vector<double>, std::vector<double>>
Simulator::pressure_step(const std::vector<double>& u_twothirds, SolverReport* report) {
    DegenerateStokesOptions opts;
    opts.constrained_vel = &vel_mask_;
    opts.schur_precond = schur_precond_.get();
    opts.mass_precond = mass_precond_.get();
    opts.p_warm = state_.p;
    opts.max_outer = cfg_.pressure_max_outer;
    auto sol = solve_degenerate_stokes(mass_constrained_, B_, u_twothirds, cfg_.dt,
                                       cfg_.pressure_tol, opts);
    last_pressure_ = sol.report;
    if (report) *report = sol.report;
    if (!sol.report.converged)
        throw SolverFailure("pressure step", sol.report.final_residual, sol.report.iterations);
    check_finite(sol.u, "pressure");
    return {std::move(sol.u), std::move(sol.p)};
}

void Simulator::update_solid(const std::vector<double>& u_next) {
    auto& solid = state_.solid;
    auto& ss = state_.solid_state;

    // Strain update with gradients in the configuration the step started from.
    for (int k = 0; k < state_.qmap.size(); ++k) {
        const Mat2 G = interp_gradient(state_.qmap.records[k], u_next);
        ss.s[k] = update_s(ss.s[k], G, cfg_.dt);
        ss.F[k] = (Mat2::identity() + cfg_.dt * G) * ss.F[k];
        ss.J[k] = det(ss.F[k]);
    }

    std::vector<char> anchored(solid.n_nodes(), 0);
    for (int n : solid.anchored_nodes) anchored[n] = 1;
    for (int i = 0; i < solid.n_nodes(); ++i) {
        if (anchored[i]) {
            solid.cur_coords[i] = solid.ref_coords[i];
            continue;
        }
        const Vec2 v = interp_value(state_.nmap.records[i], u_next);
        const Vec2 moved = solid.cur_coords[i] + cfg_.dt * v;
        if (!bg_.domain.contains(moved))
            throw OutOfDomainError(moved.x, moved.y,
                                   "solid node " + std::to_string(i) + " escaped at step " +
                                       std::to_string(state_.step + 1));
        solid.cur_coords[i] = moved;
    }
    solid.touch();

    state_.qmap = build_transfer_map(bg_, solid, triangle_3pt());
    state_.nmap = build_nodal_map(bg_, solid);
    for (int k = 0; k < state_.qmap.size(); ++k)
        ss.grad_u[k] = interp_gradient(state_.qmap.records[k], u_next);
}

StepInfo Simulator::advance() {
    StepInfo info;
    const auto u_third = convection_step();
    info.convection = last_convection_;

    std::vector<double> u23;
    switch (cfg_.scheme) {
        case Scheme::explicit_ifem: u23 = diffusion_step_explicit(u_third); break;
        case Scheme::implicit_ifem: u23 = diffusion_step_implicit(u_third, &info.fp_iterations); break;
        case Scheme::one_field_fdm: u23 = diffusion_step_fdm(u_third); break;
    }
    info.diffusion = last_diffusion_;

    auto [u_next, p_next] = pressure_step(u23, &info.pressure);
    info.divergence_residual = info.pressure.final_residual;

    update_solid(u_next);
    state_.u_prev = std::move(state_.u);
    state_.u = std::move(u_next);
    state_.p = std::move(p_next);
    state_.t += cfg_.dt;
    ++state_.step;
    return info;
}

std::vector<Vec2> Simulator::solid_node_velocities(std::span<const double> u) const {
    std::vector<Vec2> v;
    v.reserve(state_.nmap.size());
    for (const auto& rec : state_.nmap.records) v.push_back(interp_value(rec, u));
    return v;
}

double Simulator::mass_norm(std::span<const double> u) const {
    std::vector<double> Mu(u.size());
    matvec(M_, u, Mu);
    return std::sqrt(std::max(0.0, vec_dot(u, Mu)));
}

} // namespace fsim
