#include "fsim/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fsim/errors.hpp"
#include "fsim/shapes.hpp"

namespace fsim {

double SolidMesh::signed_area(int tri, bool reference) const {
    const auto& c = reference ? ref_coords : cur_coords;
    const auto& t = triangles[tri];
    const Vec2 a = c[t[0]], b = c[t[1]], d = c[t[2]];
    return 0.5 * ((b.x - a.x) * (d.y - a.y) - (d.x - a.x) * (b.y - a.y));
}

double SolidMesh::total_area(bool reference) const {
    double s = 0.0;
    for (int t = 0; t < n_triangles(); ++t) s += signed_area(t, reference);
    return s;
}

BackgroundMesh build_background_grid(int nx, int ny, const Rect& domain) {
    if (nx < 1 || ny < 1) throw std::invalid_argument("build_background_grid: need nx,ny >= 1");
    if (domain.width() <= 0.0 || domain.height() <= 0.0)
        throw std::invalid_argument("build_background_grid: degenerate domain");

    BackgroundMesh m;
    m.nx = nx;
    m.ny = ny;
    m.domain = domain;

    const int vx = 2 * nx + 1, vy = 2 * ny + 1;
    m.velocity_nodes.reserve(static_cast<std::size_t>(vx) * vy);
    m.dirichlet_tags.assign(static_cast<std::size_t>(vx) * vy, 0);
    for (int gy = 0; gy < vy; ++gy) {
        for (int gx = 0; gx < vx; ++gx) {
            m.velocity_nodes.push_back({domain.x0 + 0.5 * gx * m.hx(),
                                        domain.y0 + 0.5 * gy * m.hy()});
            std::uint8_t tag = 0;
            if (gx == 0) tag |= boundary_left;
            if (gx == vx - 1) tag |= boundary_right;
            if (gy == 0) tag |= boundary_bottom;
            if (gy == vy - 1) tag |= boundary_top;
            m.dirichlet_tags[m.vel_node_index(gx, gy)] = tag;
        }
    }

    m.pressure_nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
    for (int gy = 0; gy <= ny; ++gy)
        for (int gx = 0; gx <= nx; ++gx)
            m.pressure_nodes.push_back({domain.x0 + gx * m.hx(), domain.y0 + gy * m.hy()});

    m.vel_conn.reserve(m.n_elements());
    m.pres_conn.reserve(m.n_elements());
    for (int ey = 0; ey < ny; ++ey) {
        for (int ex = 0; ex < nx; ++ex) {
            std::array<int, 9> vc;
            for (int jy = 0; jy < 3; ++jy)
                for (int jx = 0; jx < 3; ++jx)
                    vc[3 * jy + jx] = m.vel_node_index(2 * ex + jx, 2 * ey + jy);
            m.vel_conn.push_back(vc);
            m.pres_conn.push_back({m.pres_node_index(ex, ey), m.pres_node_index(ex + 1, ey),
                                   m.pres_node_index(ex, ey + 1), m.pres_node_index(ex + 1, ey + 1)});
        }
    }
    return m;
}

SolidMesh build_disc_mesh(const Vec2& center, double radius, int target_triangles) {
    if (radius <= 0.0) throw std::invalid_argument("build_disc_mesh: radius must be positive");
    if (target_triangles < 8)
        throw std::invalid_argument("build_disc_mesh: need at least 8 triangles for one ring");

    // m rings of 8i nodes give exactly 8m^2 triangles.
    const int rings = std::max(1, static_cast<int>(std::lround(
                                      std::sqrt(static_cast<double>(target_triangles) / 8.0))));

    SolidMesh mesh;
    mesh.ref_coords.push_back(center);
    std::vector<int> ring_start{0};
    for (int i = 1; i <= rings; ++i) {
        ring_start.push_back(mesh.n_nodes());
        const int n = 8 * i;
        const double r = radius * i / rings;
        for (int k = 0; k < n; ++k) {
            const double th = 2.0 * std::numbers::pi * k / n;
            mesh.ref_coords.push_back({center.x + r * std::cos(th), center.y + r * std::sin(th)});
        }
    }

    // Innermost fan around the center node.
    for (int k = 0; k < 8; ++k)
        mesh.triangles.push_back({0, ring_start[1] + k, ring_start[1] + (k + 1) % 8});

    // Stitch consecutive rings by advancing whichever side trails in angle.
    for (int i = 2; i <= rings; ++i) {
        const int n_in = 8 * (i - 1), n_out = 8 * i;
        const int s_in = ring_start[i - 1], s_out = ring_start[i];
        int a = 0, b = 0; // steps taken on inner / outer ring
        while (a < n_in || b < n_out) {
            const double next_in = (a + 1.0) / n_in;
            const double next_out = (b + 1.0) / n_out;
            const int pi = s_in + a % n_in, po = s_out + b % n_out;
            if (b < n_out && (a == n_in || next_out <= next_in)) {
                mesh.triangles.push_back({po, s_out + (b + 1) % n_out, pi});
                ++b;
            } else {
                mesh.triangles.push_back({pi, po, s_in + (a + 1) % n_in});
                ++a;
            }
        }
    }

    mesh.cur_coords = mesh.ref_coords;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        if (mesh.signed_area(t) <= 0.0)
            throw std::logic_error("build_disc_mesh: produced a non-positive triangle");
    }
    return mesh;
}

SolidMesh build_leaflet_mesh(double base_x, double width, double height, int target_triangles) {
    if (width <= 0.0 || height <= 0.0)
        throw std::invalid_argument("build_leaflet_mesh: need positive width and height");
    if (target_triangles < 2)
        throw std::invalid_argument("build_leaflet_mesh: need at least 2 triangles");

    // Pick the nx x ny split with 2*nx*ny closest to the target, preferring
    // elements closest to square.
    int best_nx = 1, best_ny = std::max(1, (target_triangles + 1) / 2);
    double best_aspect = 1e300;
    int best_err = 1 << 30;
    for (int cx = 1; cx <= 64; ++cx) {
        const int cy = std::max(1, static_cast<int>(std::lround(target_triangles / (2.0 * cx))));
        const int err = std::abs(2 * cx * cy - target_triangles);
        const double aspect = std::abs(std::log((width / cx) / (height / cy)));
        if (err < best_err || (err == best_err && aspect < best_aspect)) {
            best_err = err;
            best_aspect = aspect;
            best_nx = cx;
            best_ny = cy;
        }
    }

    SolidMesh mesh;
    const int nx = best_nx, ny = best_ny;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            mesh.ref_coords.push_back({base_x + width * i / nx, height * j / ny});
    auto node = [nx](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            mesh.triangles.push_back({node(i, j), node(i + 1, j), node(i + 1, j + 1)});
            mesh.triangles.push_back({node(i, j), node(i + 1, j + 1), node(i, j + 1)});
        }
    }
    for (int i = 0; i <= nx; ++i) mesh.anchored_nodes.push_back(node(i, 0));
    mesh.cur_coords = mesh.ref_coords;
    return mesh;
}

std::pair<int, Vec2> locate_point(const BackgroundMesh& mesh, const Vec2& x) {
    if (!mesh.domain.contains(x)) throw OutOfDomainError(x.x, x.y, "locate_point");

    const double sx = (x.x - mesh.domain.x0) / mesh.hx();
    const double sy = (x.y - mesh.domain.y0) / mesh.hy();
    int ex = std::min(static_cast<int>(std::floor(sx)), mesh.nx - 1);
    int ey = std::min(static_cast<int>(std::floor(sy)), mesh.ny - 1);
    double lx = 2.0 * (sx - ex) - 1.0;
    double ly = 2.0 * (sy - ey) - 1.0;
    // Points exactly on an interior face belong to the lower-index neighbour.
    if (lx == -1.0 && ex > 0) {
        --ex;
        lx = 1.0;
    }
    if (ly == -1.0 && ey > 0) {
        --ey;
        ly = 1.0;
    }
    return {mesh.element_index(ex, ey), Vec2{lx, ly}};
}

namespace {

TransferRecord make_record(const BackgroundMesh& bg, const Vec2& x, double weight) {
    auto [elem, local] = locate_point(bg, x);
    TransferRecord rec;
    rec.element = elem;
    rec.local = local;
    rec.nodes = bg.vel_conn[elem];
    rec.phi = q2_values(local);
    const auto ref_grad = q2_ref_gradients(local);
    const double sx = 2.0 / bg.hx(), sy = 2.0 / bg.hy();
    for (int i = 0; i < 9; ++i) rec.grad[i] = {ref_grad[i].x * sx, ref_grad[i].y * sy};
    rec.weight = weight;

    double sum = 0.0;
    for (double p : rec.phi) sum += p;
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::logic_error("transfer record violates partition of unity");
    return rec;
}

} // namespace

TransferMap build_transfer_map(const BackgroundMesh& bg, const SolidMesh& solid,
                               const QuadratureRule& rule) {
    TransferMap map;
    map.points_per_triangle = static_cast<int>(rule.size());
    map.n_vel_nodes = bg.n_vel_nodes();
    map.solid_revision = solid.revision;
    map.records.reserve(static_cast<std::size_t>(solid.n_triangles()) * rule.size());

    for (int t = 0; t < solid.n_triangles(); ++t) {
        const auto& tri = solid.triangles[t];
        const Vec2 a = solid.cur_coords[tri[0]];
        const Vec2 b = solid.cur_coords[tri[1]];
        const Vec2 c = solid.cur_coords[tri[2]];
        const double jac = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const auto sh = p1_values(rule.points[q]);
            const Vec2 x = sh[0] * a + sh[1] * b + sh[2] * c;
            map.records.push_back(make_record(bg, x, rule.weights[q] * jac));
        }
    }
    return map;
}

TransferMap build_nodal_map(const BackgroundMesh& bg, const SolidMesh& solid) {
    TransferMap map;
    map.points_per_triangle = 0;
    map.n_vel_nodes = bg.n_vel_nodes();
    map.solid_revision = solid.revision;
    map.records.reserve(solid.n_nodes());
    for (const auto& x : solid.cur_coords) map.records.push_back(make_record(bg, x, 0.0));
    return map;
}

Vec2 interp_value(const TransferRecord& rec, std::span<const double> u) {
    Vec2 v;
    for (int i = 0; i < 9; ++i) {
        const int n = rec.nodes[i];
        v.x += rec.phi[i] * u[2 * n];
        v.y += rec.phi[i] * u[2 * n + 1];
    }
    return v;
}

Mat2 interp_gradient(const TransferRecord& rec, std::span<const double> u) {
    Mat2 g;
    for (int i = 0; i < 9; ++i) {
        const int n = rec.nodes[i];
        const double ux = u[2 * n], uy = u[2 * n + 1];
        g(0, 0) += ux * rec.grad[i].x;
        g(0, 1) += ux * rec.grad[i].y;
        g(1, 0) += uy * rec.grad[i].x;
        g(1, 1) += uy * rec.grad[i].y;
    }
    return g;
}

std::pair<Vec2, Mat2> interp_at(const TransferRecord& rec, std::span<const double> u) {
    if (u.size() % 2 != 0) throw std::invalid_argument("interp_at: dof vector must interleave x/y");
    for (int n : rec.nodes)
        if (2 * n + 1 >= static_cast<int>(u.size()))
            throw std::invalid_argument("interp_at: dof vector too small for host element");
    return {interp_value(rec, u), interp_gradient(rec, u)};
}

void distribute_to_background(const TransferRecord& rec, const Vec2& load, std::span<double> out) {
    for (int i = 0; i < 9; ++i) {
        const int n = rec.nodes[i];
        if (2 * n + 1 >= static_cast<int>(out.size()))
            throw std::invalid_argument("distribute_to_background: output vector too small");
        out[2 * n] += rec.phi[i] * load.x;
        out[2 * n + 1] += rec.phi[i] * load.y;
    }
}

} // namespace fsim
