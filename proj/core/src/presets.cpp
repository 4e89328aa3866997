#include "fsim/presets.hpp"

#include <cmath>
#include <numbers>

#include "fsim/errors.hpp"

namespace fsim {

namespace {

BenchmarkCase cavity_base() {
    BenchmarkCase c;
    c.kind = BenchmarkKind::cavity_disc;
    c.domain = Rect::unit();
    c.grid_nx = c.grid_ny = 40;
    c.disc_center = {0.6, 0.5};
    c.disc_radius = 0.2;
    c.disc_triangles = 1373;
    c.lid_velocity = {1.0, 0.0};
    c.scheme.re = 100.0;
    c.scheme.dt = 5e-3;
    c.scheme.t_end = 10.0;
    // Plain fixed-point iteration contracts slowly near large deformation;
    // the published implicit runs need more headroom than the default cap.
    c.scheme.fp_max_iters = 1000;
    return c;
}

BenchmarkCase leaflet_base() {
    BenchmarkCase c;
    c.kind = BenchmarkKind::leaflet;
    c.domain = {0.0, 0.0, 4.0, 1.0};
    c.grid_nx = 189;
    c.grid_ny = 47;
    c.leaflet_width = 0.0212;
    c.leaflet_height = 0.8;
    c.leaflet_base_x = 2.0 - 0.0212 / 2.0;
    c.leaflet_triangles = 152;
    c.inflow_period = 10.0;
    c.scheme.re = 100.0;
    c.scheme.dt = 5e-3;
    c.scheme.t_end = 10.0;
    c.scheme.fp_max_iters = 1000;
    return c;
}

void set_params(BenchmarkCase& c, double re, double c1, double rho_r, double mu_r, double dt) {
    c.scheme.re = re;
    c.scheme.c1_tilde = c1;
    c.scheme.rho_r = rho_r;
    c.scheme.mu_r = mu_r;
    c.scheme.dt = dt;
}

void coarsen(BenchmarkCase& c) {
    c.grid_nx = std::max(1, c.grid_nx / 2);
    c.grid_ny = std::max(1, c.grid_ny / 2);
    if (c.kind == BenchmarkKind::cavity_disc) {
        c.disc_triangles = std::max(8, c.disc_triangles / 4);
        c.scheme.t_end = 2.5;
    } else {
        c.leaflet_triangles = std::max(2, c.leaflet_triangles / 2);
        c.scheme.t_end = 2.0;
    }
}

} // namespace

BenchmarkCase preset(const std::string& name) {
    std::string base = name;
    bool coarse = false;
    const std::string suffix = "-coarse";
    if (base.size() > suffix.size() &&
        base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
        coarse = true;
        base = base.substr(0, base.size() - suffix.size());
    }

    BenchmarkCase c;
    if (base == "cavity-1") {
        c = cavity_base();
        set_params(c, 100.0, 0.1, 1.0, 1.0, 1e-3);
    } else if (base == "cavity-2") {
        c = cavity_base();
        set_params(c, 100.0, 1.0, 1.0, 1.0, 5e-3);
    } else if (base == "cavity-3") {
        c = cavity_base();
        set_params(c, 100.0, 1.0, 2.0, 1.0, 5e-3);
    } else if (base == "cavity-4") {
        c = cavity_base();
        set_params(c, 100.0, 1.0, 0.5, 1.0, 5e-3);
    } else if (base == "cavity-5") {
        c = cavity_base();
        set_params(c, 100.0, 1.0, 1.0, 1.5, 5e-3);
    } else if (base == "cavity-6") {
        c = cavity_base();
        set_params(c, 100.0, 1.0, 1.0, 2.0, 5e-3);
    } else if (base == "cavity-7") {
        c = cavity_base();
        set_params(c, 500.0, 0.5, 2.0, 2.0, 5e-3);
    } else if (base == "leaflet-1") {
        c = leaflet_base();
        set_params(c, 100.0, 1000.0, 1.0, 1.0, 5e-3);
    } else if (base == "leaflet-2") {
        c = leaflet_base();
        set_params(c, 100.0, 1000.0, 1.2, 1.0, 1e-4);
    } else if (base == "leaflet-3") {
        c = leaflet_base();
        set_params(c, 300.0, 10000.0, 2.0, 2.0, 5e-3);
    } else {
        std::string msg = "unknown preset '" + name + "'; valid presets:";
        for (const auto& n : preset_names()) msg += " " + n;
        throw ConfigError(msg);
    }
    c.name = name;
    if (coarse) coarsen(c);
    return c;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (int i = 1; i <= 7; ++i) {
        names.push_back("cavity-" + std::to_string(i));
        names.push_back("cavity-" + std::to_string(i) + "-coarse");
    }
    for (int i = 1; i <= 3; ++i) {
        names.push_back("leaflet-" + std::to_string(i));
        names.push_back("leaflet-" + std::to_string(i) + "-coarse");
    }
    return names;
}

Vec2 inflow_profile(double y, double t, double period) {
    return {1.5 * y * (2.0 - y) * std::sin(2.0 * std::numbers::pi * t / period), 0.0};
}

BackgroundMesh make_background(const BenchmarkCase& c) {
    return build_background_grid(c.grid_nx, c.grid_ny, c.domain);
}

SolidMesh make_solid(const BenchmarkCase& c) {
    if (c.kind == BenchmarkKind::cavity_disc)
        return build_disc_mesh(c.disc_center, c.disc_radius, c.disc_triangles);
    return build_leaflet_mesh(c.leaflet_base_x, c.leaflet_width, c.leaflet_height,
                              c.leaflet_triangles);
}

DirichletBC make_boundary_conditions(const BenchmarkCase& c, const BackgroundMesh& bg) {
    DirichletBC bc;
    if (c.kind == BenchmarkKind::cavity_disc) {
        // Lid on top (corner nodes included), no-slip on the other walls.
        for (int n = 0; n < bg.n_vel_nodes(); ++n) {
            if (!bg.dirichlet_tags[n]) continue;
            bc.dofs.push_back(2 * n);
            bc.dofs.push_back(2 * n + 1);
        }
        const Vec2 lid = c.lid_velocity;
        auto tags = bg.dirichlet_tags;
        bc.eval = [tags, lid](double, std::span<const int> dofs, std::span<double> values) {
            for (std::size_t i = 0; i < dofs.size(); ++i) {
                const int node = dofs[i] / 2;
                const int comp = dofs[i] % 2;
                const Vec2 v = (tags[node] & boundary_top) ? lid : Vec2{0.0, 0.0};
                values[i] = comp == 0 ? v.x : v.y;
            }
        };
    } else {
        // Periodic inflow profile on inlet and outlet, no-slip on the bottom
        // wall, symmetry (u_y = 0) along the top.
        for (int n = 0; n < bg.n_vel_nodes(); ++n) {
            const auto tag = bg.dirichlet_tags[n];
            if (!tag) continue;
            if (tag & (boundary_left | boundary_right)) {
                bc.dofs.push_back(2 * n);
                bc.dofs.push_back(2 * n + 1);
            } else if (tag & boundary_bottom) {
                bc.dofs.push_back(2 * n);
                bc.dofs.push_back(2 * n + 1);
            } else { // top, interior of the edge
                bc.dofs.push_back(2 * n + 1);
            }
        }
        auto tags = bg.dirichlet_tags;
        std::vector<double> node_y(bg.n_vel_nodes());
        for (int n = 0; n < bg.n_vel_nodes(); ++n) node_y[n] = bg.velocity_nodes[n].y;
        const double period = c.inflow_period;
        bc.eval = [tags, node_y, period](double t, std::span<const int> dofs,
                                         std::span<double> values) {
            for (std::size_t i = 0; i < dofs.size(); ++i) {
                const int node = dofs[i] / 2;
                const int comp = dofs[i] % 2;
                const auto tag = tags[node];
                Vec2 v{0.0, 0.0};
                if (tag & (boundary_left | boundary_right))
                    v = inflow_profile(node_y[node], t, period);
                values[i] = comp == 0 ? v.x : v.y;
            }
        };
    }
    return bc;
}

Simulator make_simulator(const BenchmarkCase& c) {
    auto bg = make_background(c);
    auto solid = make_solid(c);
    auto bc = make_boundary_conditions(c, bg);
    return Simulator(std::move(bg), std::move(solid), c.scheme, std::move(bc));
}

} // namespace fsim
