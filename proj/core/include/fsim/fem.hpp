#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fsim/mesh.hpp"
#include "fsim/sparse.hpp"

namespace fsim {

/// Dof ordering: velocity x/y interleaved per node (dof = 2*node + comp),
/// pressure indexed separately in its own block.
struct DofLayout {
    int n_vel_nodes = 0;
    int n_pres_nodes = 0;

    int n_vel_dofs() const { return 2 * n_vel_nodes; }
    static int vel_dof(int node, int comp) { return 2 * node + comp; }
};

/// One sparse operator plus right-hand side for a linear solve.
struct SparseSystem {
    CsrMatrix A;
    std::vector<double> rhs;
    bool symmetric = false;
    DofLayout layout;
};

/// Shared sparsity pattern of all vector-valued background operators
/// (every dof pair sharing an element), with per-element scatter tables.
/// Rows 2n and 2n+1 share a column layout, so the (c,d) component entry of
/// node pair (a,b) sits at base + c*row_len_a + d.
struct VelocityPattern {
    std::shared_ptr<const CsrPattern> pattern;
    std::vector<std::array<int, 81>> elem_base; // value index of (2*node_a, 2*node_b)
    std::vector<std::array<int, 9>> elem_row_len;

    int scatter(int e, int a, int b, int c, int d) const {
        return elem_base[e][9 * a + b] + c * elem_row_len[e][a] + d;
    }
};

/// Scalar (per-component) counterpart, used by the convection operator.
struct ScalarPattern {
    std::shared_ptr<const CsrPattern> pattern;
    std::vector<std::array<int, 81>> elem_idx; // value index of (node_a, node_b)
};

VelocityPattern build_velocity_pattern(const BackgroundMesh& bg);
ScalarPattern build_scalar_pattern(const BackgroundMesh& bg);

/// Q2 basis data at the 3x3 Gauss points of one (uniform-grid) element:
/// values, physical gradients, and quadrature weight times Jacobian.
struct ElementBasis {
    std::array<std::array<double, 9>, 9> phi;
    std::array<std::array<Vec2, 9>, 9> grad;
    std::array<double, 9> w;
};
ElementBasis element_basis(const BackgroundMesh& bg);

/// Velocity mass operator: M[(i,c),(j,d)] = delta_cd * integral(phi_i phi_j).
CsrMatrix assemble_mass(const BackgroundMesh& bg);

/// Viscous operator of the D-form: coeff * integral(D u : D v), D = grad + grad^T.
/// coeff is 1/(2 Re) in the dimensionless setting.
CsrMatrix assemble_diffusion(const BackgroundMesh& bg, double coeff);

/// Divergence operator (pressure x velocity): (B u)_q = -integral(psi_q div u).
CsrMatrix assemble_divergence(const BackgroundMesh& bg);

/// Q1 pressure stiffness integral(grad psi_a . grad psi_b); Schur preconditioner.
CsrMatrix assemble_pressure_stiffness(const BackgroundMesh& bg);

/// Nodal load vector L[i] = integral(phi_i) over the domain (one scalar per node).
std::vector<double> assemble_load(const BackgroundMesh& bg);

/// Boundary-traction contribution integral_{side}(hbar . v) on one side of the
/// rectangle. Unused by the enclosed benchmarks but completes the weak form.
std::vector<double> assemble_neumann(const BackgroundMesh& bg, BoundaryTag side, const Vec2& hbar);

/// Dof-level Dirichlet constraints bound to one sparsity pattern. eliminate()
/// performs the symmetric elimination (identity rows/columns); correct_rhs()
/// moves the recorded column values times the boundary data to the right side.
class DirichletSet {
  public:
    DirichletSet() = default;
    DirichletSet(std::shared_ptr<const CsrPattern> pattern, std::vector<int> dofs);

    void eliminate(CsrMatrix& A);
    void correct_rhs(std::span<double> rhs, std::span<const double> values) const;

    const std::vector<int>& dofs() const { return dofs_; }
    const std::vector<char>& mask() const { return mask_; }
    bool empty() const { return dofs_.empty(); }

  private:
    std::shared_ptr<const CsrPattern> pattern_;
    std::vector<int> dofs_;
    std::vector<char> mask_;
    std::vector<int> row_entries_;
    std::vector<int> diag_entries_;
    struct ColEntry {
        int row;
        int idx;
        int dof_pos;
    };
    std::vector<ColEntry> col_entries_;
    std::vector<double> saved_;
    bool eliminated_ = false;
};

/// Constrain whole velocity nodes (both components) to prescribed values.
/// Nodes must be boundary nodes of the mesh.
void apply_dirichlet(SparseSystem& system, const BackgroundMesh& bg,
                     std::span<const int> nodes, std::span<const Vec2> values);

} // namespace fsim
