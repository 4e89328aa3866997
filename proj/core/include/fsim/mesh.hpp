#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fsim/geometry.hpp"
#include "fsim/quadrature.hpp"

namespace fsim {

/// Bitmask tags for boundary velocity nodes, by side of the rectangle.
enum BoundaryTag : std::uint8_t {
    boundary_left = 1,
    boundary_right = 2,
    boundary_bottom = 4,
    boundary_top = 8,
};

/// Fixed Eulerian Taylor-Hood grid: Q2 velocity lattice over Q1 pressure lattice
/// on an axis-aligned rectangle of nx x ny elements.
struct BackgroundMesh {
    int nx = 0;
    int ny = 0;
    Rect domain;
    std::vector<Vec2> velocity_nodes;               // (2nx+1)(2ny+1), y-major lattice
    std::vector<Vec2> pressure_nodes;               // (nx+1)(ny+1)
    std::vector<std::array<int, 9>> vel_conn;       // per element, lattice row-major
    std::vector<std::array<int, 4>> pres_conn;      // per element
    std::vector<std::uint8_t> dirichlet_tags;       // per velocity node, BoundaryTag bits

    int n_vel_nodes() const { return (2 * nx + 1) * (2 * ny + 1); }
    int n_pres_nodes() const { return (nx + 1) * (ny + 1); }
    int n_elements() const { return nx * ny; }
    int n_vel_dofs() const { return 2 * n_vel_nodes(); }
    double hx() const { return domain.width() / nx; }
    double hy() const { return domain.height() / ny; }
    int element_index(int ex, int ey) const { return ey * nx + ex; }
    int vel_node_index(int gx, int gy) const { return gy * (2 * nx + 1) + gx; }
    int pres_node_index(int gx, int gy) const { return gy * (nx + 1) + gx; }
};

/// Lagrangian linear-triangle mesh carrying reference and current coordinates.
struct SolidMesh {
    std::vector<Vec2> ref_coords;
    std::vector<Vec2> cur_coords;
    std::vector<std::array<int, 3>> triangles;
    std::vector<int> anchored_nodes;  // externally fixed motion (e.g. leaflet base)
    std::uint64_t revision = 0;       // bumped whenever cur_coords move

    int n_nodes() const { return static_cast<int>(ref_coords.size()); }
    int n_triangles() const { return static_cast<int>(triangles.size()); }
    void touch() { ++revision; }

    double signed_area(int tri, bool reference = false) const;
    double total_area(bool reference = false) const;
};

/// One solid quadrature (or nodal) point expressed in background-element terms.
struct TransferRecord {
    int element = -1;
    Vec2 local;                    // reference coordinates in [-1,1]^2
    std::array<int, 9> nodes;      // global velocity node ids of the host element
    std::array<double, 9> phi;     // Q2 values at the point
    std::array<Vec2, 9> grad;      // gradients w.r.t. physical (current) coordinates
    double weight = 0.0;           // triangle quadrature weight x current Jacobian
};

/// Interpolation/distribution operators between the solid quadrature points and
/// the background velocity dofs. Immutable after construction.
struct TransferMap {
    std::vector<TransferRecord> records; // triangle-major, quadrature-point-minor
    int points_per_triangle = 0;
    int n_vel_nodes = 0;
    std::uint64_t solid_revision = 0;

    int size() const { return static_cast<int>(records.size()); }
    bool stale_for(const SolidMesh& solid) const { return solid_revision != solid.revision; }
};

BackgroundMesh build_background_grid(int nx, int ny, const Rect& domain);

/// Triangulated disc built from concentric rings (8 new boundary nodes per ring);
/// achieved triangle count is 8*m^2 for the nearest ring count m.
SolidMesh build_disc_mesh(const Vec2& center, double radius, int target_triangles);

/// Structured triangulation of [base_x, base_x+w] x [0, h]; nodes on y=0 are anchored.
SolidMesh build_leaflet_mesh(double base_x, double width, double height, int target_triangles);

/// Locate a point in the background grid by index arithmetic. Ties on element
/// faces resolve to the lowest adjacent element index. Throws OutOfDomainError.
std::pair<int, Vec2> locate_point(const BackgroundMesh& mesh, const Vec2& x);

/// One record per (triangle x quadrature point) of the given rule, in the
/// solid's current configuration.
TransferMap build_transfer_map(const BackgroundMesh& bg, const SolidMesh& solid,
                               const QuadratureRule& rule);

/// One record per solid node (weight 0), for nodal interpolation.
TransferMap build_nodal_map(const BackgroundMesh& bg, const SolidMesh& solid);

/// Value and gradient of a background velocity field at a transfer record.
/// Gradient rows are components: G(c,b) = d u_c / d x_b.
Vec2 interp_value(const TransferRecord& rec, std::span<const double> u);
Mat2 interp_gradient(const TransferRecord& rec, std::span<const double> u);
std::pair<Vec2, Mat2> interp_at(const TransferRecord& rec, std::span<const double> u);

/// Adjoint of interp_value: out[2*node+c] += phi * load_c.
void distribute_to_background(const TransferRecord& rec, const Vec2& load, std::span<double> out);

} // namespace fsim
