#include "fsim/fem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fsim/quadrature.hpp"
#include "fsim/shapes.hpp"

namespace fsim {

ElementBasis element_basis(const BackgroundMesh& bg) {
    const auto rule = quad_gauss_3x3();
    ElementBasis eb;
    const double jac = bg.hx() * bg.hy() / 4.0;
    const double sx = 2.0 / bg.hx(), sy = 2.0 / bg.hy();
    for (std::size_t q = 0; q < rule.size(); ++q) {
        eb.phi[q] = q2_values(rule.points[q]);
        const auto rg = q2_ref_gradients(rule.points[q]);
        for (int i = 0; i < 9; ++i) eb.grad[q][i] = {rg[i].x * sx, rg[i].y * sy};
        eb.w[q] = rule.weights[q] * jac;
    }
    return eb;
}

namespace {

std::shared_ptr<const CsrPattern> pattern_from_conn(int n_rows_per_node, int n_nodes,
                                                    const std::vector<std::array<int, 9>>& conn) {
    std::vector<std::vector<int>> adj(n_nodes);
    for (const auto& el : conn)
        for (int a : el)
            for (int b : el) adj[a].push_back(b);
    auto pat = std::make_shared<CsrPattern>();
    pat->rows = pat->cols = n_rows_per_node * n_nodes;
    pat->row_ptr.assign(pat->rows + 1, 0);
    for (int n = 0; n < n_nodes; ++n) {
        auto& nb = adj[n];
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        for (int r = 0; r < n_rows_per_node; ++r)
            pat->row_ptr[n_rows_per_node * n + r + 1] =
                static_cast<int>(nb.size()) * n_rows_per_node;
    }
    for (int r = 0; r < pat->rows; ++r) pat->row_ptr[r + 1] += pat->row_ptr[r];
    pat->col_idx.resize(pat->row_ptr.back());
    for (int n = 0; n < n_nodes; ++n) {
        for (int r = 0; r < n_rows_per_node; ++r) {
            int k = pat->row_ptr[n_rows_per_node * n + r];
            for (int b : adj[n])
                for (int c = 0; c < n_rows_per_node; ++c) pat->col_idx[k++] = n_rows_per_node * b + c;
        }
    }
    return pat;
}

} // namespace

VelocityPattern build_velocity_pattern(const BackgroundMesh& bg) {
    VelocityPattern vp;
    vp.pattern = pattern_from_conn(2, bg.n_vel_nodes(), bg.vel_conn);
    vp.elem_base.resize(bg.n_elements());
    vp.elem_row_len.resize(bg.n_elements());
    for (int e = 0; e < bg.n_elements(); ++e) {
        const auto& el = bg.vel_conn[e];
        for (int a = 0; a < 9; ++a) {
            vp.elem_row_len[e][a] =
                vp.pattern->row_ptr[2 * el[a] + 1] - vp.pattern->row_ptr[2 * el[a]];
            for (int b = 0; b < 9; ++b) {
                const int idx = vp.pattern->find(2 * el[a], 2 * el[b]);
                if (idx < 0) throw std::logic_error("velocity pattern is missing an element pair");
                vp.elem_base[e][9 * a + b] = idx;
            }
        }
    }
    return vp;
}

ScalarPattern build_scalar_pattern(const BackgroundMesh& bg) {
    ScalarPattern sp;
    sp.pattern = pattern_from_conn(1, bg.n_vel_nodes(), bg.vel_conn);
    sp.elem_idx.resize(bg.n_elements());
    for (int e = 0; e < bg.n_elements(); ++e) {
        const auto& el = bg.vel_conn[e];
        for (int a = 0; a < 9; ++a)
            for (int b = 0; b < 9; ++b) {
                const int idx = sp.pattern->find(el[a], el[b]);
                if (idx < 0) throw std::logic_error("scalar pattern is missing an element pair");
                sp.elem_idx[e][9 * a + b] = idx;
            }
    }
    return sp;
}

CsrMatrix assemble_mass(const BackgroundMesh& bg) {
    const auto eb = element_basis(bg);
    std::array<double, 81> local{};
    for (int q = 0; q < 9; ++q)
        for (int a = 0; a < 9; ++a)
            for (int b = 0; b < 9; ++b) local[9 * a + b] += eb.w[q] * eb.phi[q][a] * eb.phi[q][b];

    CsrBuilder builder(bg.n_vel_dofs(), bg.n_vel_dofs());
    for (const auto& el : bg.vel_conn)
        for (int a = 0; a < 9; ++a)
            for (int b = 0; b < 9; ++b)
                for (int c = 0; c < 2; ++c)
                    builder.add(2 * el[a] + c, 2 * el[b] + c, local[9 * a + b]);
    return builder.build();
}

CsrMatrix assemble_diffusion(const BackgroundMesh& bg, double coeff) {
    if (coeff <= 0.0) throw std::invalid_argument("assemble_diffusion: coeff must be positive");
    const auto eb = element_basis(bg);
    // D u : D v for u = phi_b e_d, v = phi_a e_c is
    //   2 delta_cd (grad_a . grad_b) + 2 grad_a[d] grad_b[c].
    std::array<std::array<double, 4>, 81> local{};
    for (int q = 0; q < 9; ++q)
        for (int a = 0; a < 9; ++a)
            for (int b = 0; b < 9; ++b) {
                const Vec2 f = eb.grad[q][a], g = eb.grad[q][b];
                const double gg = dot(f, g);
                const double w = coeff * eb.w[q];
                auto& l = local[9 * a + b];
                l[0] += w * (2.0 * gg + 2.0 * f.x * g.x); // c=0,d=0
                l[1] += w * 2.0 * f.y * g.x;              // c=0,d=1
                l[2] += w * 2.0 * f.x * g.y;              // c=1,d=0
                l[3] += w * (2.0 * gg + 2.0 * f.y * g.y); // c=1,d=1
            }

    CsrBuilder builder(bg.n_vel_dofs(), bg.n_vel_dofs());
    for (const auto& el : bg.vel_conn)
        for (int a = 0; a < 9; ++a)
            for (int b = 0; b < 9; ++b) {
                const auto& l = local[9 * a + b];
                for (int c = 0; c < 2; ++c)
                    for (int d = 0; d < 2; ++d)
                        builder.add(2 * el[a] + c, 2 * el[b] + d, l[2 * c + d]);
            }
    return builder.build();
}

CsrMatrix assemble_divergence(const BackgroundMesh& bg) {
    const auto rule = quad_gauss_3x3();
    const double jac = bg.hx() * bg.hy() / 4.0;
    const double sx = 2.0 / bg.hx(), sy = 2.0 / bg.hy();
    // local[q1 node][vel node][comp]
    std::array<std::array<Vec2, 9>, 4> local{};
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const auto psi = q1_values(rule.points[q]);
        const auto rg = q2_ref_gradients(rule.points[q]);
        const double w = rule.weights[q] * jac;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 9; ++b) {
                local[a][b].x -= w * psi[a] * rg[b].x * sx;
                local[a][b].y -= w * psi[a] * rg[b].y * sy;
            }
    }

    CsrBuilder builder(bg.n_pres_nodes(), bg.n_vel_dofs());
    for (int e = 0; e < bg.n_elements(); ++e) {
        const auto& vel = bg.vel_conn[e];
        const auto& pres = bg.pres_conn[e];
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 9; ++b) {
                builder.add(pres[a], 2 * vel[b], local[a][b].x);
                builder.add(pres[a], 2 * vel[b] + 1, local[a][b].y);
            }
    }
    return builder.build();
}

CsrMatrix assemble_pressure_stiffness(const BackgroundMesh& bg) {
    const auto rule = quad_gauss_3x3();
    const double jac = bg.hx() * bg.hy() / 4.0;
    const double sx = 2.0 / bg.hx(), sy = 2.0 / bg.hy();
    std::array<double, 16> local{};
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec2 xi = rule.points[q];
        const std::array<Vec2, 4> g = {{{-0.25 * (1 - xi.y) * sx, -0.25 * (1 - xi.x) * sy},
                                        {0.25 * (1 - xi.y) * sx, -0.25 * (1 + xi.x) * sy},
                                        {-0.25 * (1 + xi.y) * sx, 0.25 * (1 - xi.x) * sy},
                                        {0.25 * (1 + xi.y) * sx, 0.25 * (1 + xi.x) * sy}}};
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                local[4 * a + b] += rule.weights[q] * jac * dot(g[a], g[b]);
    }
    CsrBuilder builder(bg.n_pres_nodes(), bg.n_pres_nodes());
    for (const auto& el : bg.pres_conn)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) builder.add(el[a], el[b], local[4 * a + b]);
    return builder.build();
}

std::vector<double> assemble_load(const BackgroundMesh& bg) {
    const auto eb = element_basis(bg);
    std::array<double, 9> local{};
    for (int q = 0; q < 9; ++q)
        for (int a = 0; a < 9; ++a) local[a] += eb.w[q] * eb.phi[q][a];
    std::vector<double> load(bg.n_vel_nodes(), 0.0);
    for (const auto& el : bg.vel_conn)
        for (int a = 0; a < 9; ++a) load[el[a]] += local[a];
    return load;
}

std::vector<double> assemble_neumann(const BackgroundMesh& bg, BoundaryTag side, const Vec2& hbar) {
    std::vector<double> rhs(bg.n_vel_dofs(), 0.0);
    const auto rule = quad_gauss_edge_3();
    const bool horizontal = (side == boundary_bottom || side == boundary_top);
    const double h_edge = horizontal ? bg.hx() : bg.hy();
    const int n_edges = horizontal ? bg.nx : bg.ny;
    const int vx = 2 * bg.nx + 1;

    for (int e = 0; e < n_edges; ++e) {
        // Global lattice indices of the 3 edge nodes.
        std::array<int, 3> nodes;
        for (int k = 0; k < 3; ++k) {
            int gx, gy;
            if (horizontal) {
                gx = 2 * e + k;
                gy = (side == boundary_bottom) ? 0 : 2 * bg.ny;
            } else {
                gx = (side == boundary_left) ? 0 : 2 * bg.nx;
                gy = 2 * e + k;
            }
            nodes[k] = gy * vx + gx;
        }
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto sh = quad1d_values(rule.points[q].x);
            const double w = rule.weights[q] * h_edge / 2.0;
            for (int k = 0; k < 3; ++k) {
                rhs[2 * nodes[k]] += w * sh[k] * hbar.x;
                rhs[2 * nodes[k] + 1] += w * sh[k] * hbar.y;
            }
        }
    }
    return rhs;
}

DirichletSet::DirichletSet(std::shared_ptr<const CsrPattern> pattern, std::vector<int> dofs)
    : pattern_(std::move(pattern)), dofs_(std::move(dofs)) {
    std::sort(dofs_.begin(), dofs_.end());
    dofs_.erase(std::unique(dofs_.begin(), dofs_.end()), dofs_.end());
    mask_.assign(pattern_->rows, 0);
    for (int d : dofs_) {
        if (d < 0 || d >= pattern_->rows)
            throw std::invalid_argument("DirichletSet: dof outside the system");
        mask_[d] = 1;
    }
    std::vector<int> dof_pos(pattern_->rows, -1);
    for (std::size_t i = 0; i < dofs_.size(); ++i) dof_pos[dofs_[i]] = static_cast<int>(i);

    diag_entries_.reserve(dofs_.size());
    for (int d : dofs_) {
        const int k = pattern_->find(d, d);
        if (k < 0) throw std::logic_error("DirichletSet: missing diagonal entry");
        diag_entries_.push_back(k);
    }
    for (int r = 0; r < pattern_->rows; ++r) {
        for (int k = pattern_->row_ptr[r]; k < pattern_->row_ptr[r + 1]; ++k) {
            const int c = pattern_->col_idx[k];
            if (mask_[r]) {
                if (c != r) row_entries_.push_back(k);
            } else if (mask_[c]) {
                col_entries_.push_back({r, k, dof_pos[c]});
            }
        }
    }
    saved_.resize(col_entries_.size(), 0.0);
}

void DirichletSet::eliminate(CsrMatrix& A) {
    if (A.pattern.get() != pattern_.get())
        throw std::invalid_argument("DirichletSet: matrix uses a different pattern");
    for (std::size_t i = 0; i < col_entries_.size(); ++i) {
        saved_[i] = A.values[col_entries_[i].idx];
        A.values[col_entries_[i].idx] = 0.0;
    }
    for (int k : row_entries_) A.values[k] = 0.0;
    for (int k : diag_entries_) A.values[k] = 1.0;
    eliminated_ = true;
}

void DirichletSet::correct_rhs(std::span<double> rhs, std::span<const double> values) const {
    if (values.size() != dofs_.size())
        throw std::invalid_argument("DirichletSet: values size mismatch");
    for (std::size_t i = 0; i < col_entries_.size(); ++i)
        rhs[col_entries_[i].row] -= saved_[i] * values[col_entries_[i].dof_pos];
    for (std::size_t i = 0; i < dofs_.size(); ++i) rhs[dofs_[i]] = values[i];
}

void apply_dirichlet(SparseSystem& system, const BackgroundMesh& bg,
                     std::span<const int> nodes, std::span<const Vec2> values) {
    if (nodes.size() != values.size())
        throw std::invalid_argument("apply_dirichlet: nodes/values size mismatch");
    std::vector<int> dofs;
    std::vector<double> dof_values;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const int n = nodes[i];
        if (n < 0 || n >= bg.n_vel_nodes())
            throw std::invalid_argument("apply_dirichlet: node outside mesh");
        dofs.push_back(2 * n);
        dofs.push_back(2 * n + 1);
        dof_values.push_back(values[i].x);
        dof_values.push_back(values[i].y);
    }
    // DirichletSet sorts its dof list; order the values the same way.
    std::vector<std::pair<int, double>> pairs(dofs.size());
    for (std::size_t i = 0; i < dofs.size(); ++i) pairs[i] = {dofs[i], dof_values[i]};
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        dofs[i] = pairs[i].first;
        dof_values[i] = pairs[i].second;
    }
    DirichletSet set(system.A.pattern, dofs);
    set.eliminate(system.A);
    set.correct_rhs(system.rhs, dof_values);
}

} // namespace fsim
