#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fsim/errors.hpp"
#include "fsim/mesh.hpp"
#include "support/oracle.hpp"

using namespace fsim;

TEST_CASE("background grid node counts match the Taylor-Hood lattice") {
    const auto small = build_background_grid(1, 1, Rect::unit());
    CHECK(small.n_vel_nodes() == 9);
    CHECK(small.n_pres_nodes() == 4);

    const auto cavity = build_background_grid(40, 40, Rect::unit());
    CHECK(cavity.n_vel_nodes() == 6561);
    CHECK(cavity.n_pres_nodes() == 1681);

    const auto channel = build_background_grid(189, 47, Rect{0.0, 0.0, 4.0, 1.0});
    CHECK(channel.n_vel_nodes() == 36005);
}

TEST_CASE("pressure lattice is nested in the velocity lattice") {
    const auto bg = build_background_grid(3, 2, Rect{0.0, 0.0, 3.0, 1.0});
    for (int py = 0; py <= bg.ny; ++py)
        for (int px = 0; px <= bg.nx; ++px) {
            const Vec2 p = bg.pressure_nodes[bg.pres_node_index(px, py)];
            const Vec2 v = bg.velocity_nodes[bg.vel_node_index(2 * px, 2 * py)];
            CHECK(p.x == doctest::Approx(v.x).epsilon(1e-15));
            CHECK(p.y == doctest::Approx(v.y).epsilon(1e-15));
        }
}

TEST_CASE("boundary tags mark sides and corners") {
    const auto bg = build_background_grid(2, 2, Rect::unit());
    CHECK(bg.dirichlet_tags[bg.vel_node_index(0, 0)] == (boundary_left | boundary_bottom));
    CHECK(bg.dirichlet_tags[bg.vel_node_index(4, 4)] == (boundary_right | boundary_top));
    CHECK(bg.dirichlet_tags[bg.vel_node_index(2, 0)] == boundary_bottom);
    CHECK(bg.dirichlet_tags[bg.vel_node_index(2, 2)] == 0);
}

TEST_CASE("degenerate grid requests are rejected") {
    CHECK_THROWS_AS(build_background_grid(0, 1, Rect::unit()), std::invalid_argument);
    CHECK_THROWS_AS(build_background_grid(1, 0, Rect::unit()), std::invalid_argument);
    CHECK_THROWS_AS(build_background_grid(1, 1, Rect{0, 0, 0, 1}), std::invalid_argument);
}

TEST_CASE("disc mesh hits the target triangle budget with positive areas") {
    const auto disc = build_disc_mesh({0.6, 0.5}, 0.2, 1373);
    CHECK(disc.n_triangles() >= 1200);
    CHECK(disc.n_triangles() <= 1550);
    for (int t = 0; t < disc.n_triangles(); ++t) {
        CHECK(disc.signed_area(t) > 0.0);
        CHECK(disc.signed_area(t, true) > 0.0);
    }
    CHECK(disc.ref_coords.size() == disc.cur_coords.size());
}

TEST_CASE("minimal disc is a single ring of 8 triangles") {
    const auto disc = build_disc_mesh({0.0, 0.0}, 0.2, 8);
    CHECK(disc.n_triangles() == 8);
    CHECK(disc.n_nodes() == 9);
    CHECK_THROWS_AS(build_disc_mesh({0.0, 0.0}, 0.2, 7), std::invalid_argument);
    CHECK_THROWS_AS(build_disc_mesh({0.0, 0.0}, -1.0, 100), std::invalid_argument);
}

TEST_CASE("disc area converges to pi r^2") {
    const double r = 0.2;
    const double target_area = std::numbers::pi * r * r;
    double prev_err = 1.0;
    for (int target : {1000, 2000, 4000}) {
        const auto disc = build_disc_mesh({0.5, 0.5}, r, target);
        const double err = std::abs(disc.total_area() - target_area) / target_area;
        CHECK(err < 0.02);
        CHECK(err <= prev_err + 1e-12);
        prev_err = err;
    }
}

TEST_CASE("leaflet mesh matches the benchmark layout") {
    const double w = 0.0212, h = 0.8;
    const auto leaf = build_leaflet_mesh(2.0 - w / 2.0, w, h, 152);
    CHECK(leaf.n_nodes() >= 96);
    CHECK(leaf.n_nodes() <= 136);
    CHECK(std::abs(leaf.total_area() - w * h) < 1e-12);
    REQUIRE(!leaf.anchored_nodes.empty());
    for (int n : leaf.anchored_nodes) CHECK(leaf.ref_coords[n].y == 0.0);
    // every y=0 node is anchored
    int base_nodes = 0;
    for (const auto& p : leaf.ref_coords) base_nodes += (p.y == 0.0);
    CHECK(base_nodes == static_cast<int>(leaf.anchored_nodes.size()));
}

TEST_CASE("two triangles tile the unit square") {
    const auto leaf = build_leaflet_mesh(0.0, 1.0, 1.0, 2);
    CHECK(leaf.n_triangles() == 2);
    CHECK(std::abs(leaf.total_area() - 1.0) < 1e-12);
}

TEST_CASE("locate_point maps element centers and vertices") {
    const auto bg = build_background_grid(4, 3, Rect{0.0, 0.0, 2.0, 1.5});

    const auto [e, loc] = locate_point(bg, {0.25, 0.25}); // center of element (0,0)
    CHECK(e == 0);
    CHECK(loc.x == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(loc.y == doctest::Approx(0.0).epsilon(1e-14));

    // shared interior vertex resolves to the lowest adjacent element
    const auto [ev, locv] = locate_point(bg, {0.5, 0.5});
    CHECK(ev == bg.element_index(0, 0));
    CHECK(locv.x == 1.0);
    CHECK(locv.y == 1.0);

    CHECK_THROWS_AS(locate_point(bg, {-0.01, 0.5}), OutOfDomainError);
    CHECK_THROWS_AS(locate_point(bg, {0.5, 1.6}), OutOfDomainError);
}

TEST_CASE("locate_point round-trips 1000 random interior points") {
    const Rect dom{0.3, -1.0, 2.3, 2.5};
    const auto bg = build_background_grid(7, 5, dom);
    std::mt19937 gen(42);
    std::uniform_real_distribution<double> ux(dom.x0, dom.x1), uy(dom.y0, dom.y1);
    for (int i = 0; i < 1000; ++i) {
        const Vec2 x{ux(gen), uy(gen)};
        const auto [e, loc] = locate_point(bg, x);
        const int ex = e % bg.nx, ey = e / bg.nx;
        const double rx = dom.x0 + (ex + 0.5 * (loc.x + 1.0)) * bg.hx();
        const double ry = dom.y0 + (ey + 0.5 * (loc.y + 1.0)) * bg.hy();
        CHECK(std::abs(rx - x.x) < 1e-12);
        CHECK(std::abs(ry - x.y) < 1e-12);
    }
}

TEST_CASE("transfer map weights integrate the solid area") {
    const auto bg = build_background_grid(8, 8, Rect::unit());

    SolidMesh tri;
    tri.ref_coords = {{0.31, 0.32}, {0.55, 0.39}, {0.42, 0.61}};
    tri.cur_coords = tri.ref_coords;
    tri.triangles = {{0, 1, 2}};

    QuadratureRule midpoint;
    midpoint.points = {{1.0 / 3.0, 1.0 / 3.0}};
    midpoint.weights = {0.5};
    const auto map1 = build_transfer_map(bg, tri, midpoint);
    REQUIRE(map1.size() == 1);
    CHECK(map1.records[0].weight == doctest::Approx(tri.signed_area(0)).epsilon(1e-14));

    const auto disc = build_disc_mesh({0.5, 0.5}, 0.2, 800);
    const auto map = build_transfer_map(bg, disc, triangle_3pt());
    double wsum = 0.0;
    for (const auto& rec : map.records) wsum += rec.weight;
    CHECK(wsum == doctest::Approx(disc.total_area()).epsilon(1e-12));
}

TEST_CASE("Q2 partition of unity at 10^4 random points") {
    const auto bg = build_background_grid(5, 4, Rect{0.0, 0.0, 1.7, 0.9});
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> ux(0.0, 1.7), uy(0.0, 0.9);
    SolidMesh probe;
    probe.triangles = {};
    for (int i = 0; i < 10000; ++i) probe.ref_coords.push_back({ux(gen), uy(gen)});
    probe.cur_coords = probe.ref_coords;
    const auto map = build_nodal_map(bg, probe);
    for (const auto& rec : map.records) {
        double s = 0.0;
        for (double p : rec.phi) s += p;
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
}

TEST_CASE("interpolation reproduces constants, linears and quadratics") {
    const auto bg = build_background_grid(6, 5, Rect{0.0, 0.0, 1.2, 1.0});
    const int n = bg.n_vel_nodes();

    std::vector<double> constant(2 * n), linear(2 * n), quad(2 * n);
    for (int i = 0; i < n; ++i) {
        constant[2 * i] = 3.25;
        constant[2 * i + 1] = -1.5;
        linear[2 * i] = bg.velocity_nodes[i].x;
        linear[2 * i + 1] = 0.0;
        quad[2 * i] = bg.velocity_nodes[i].x * bg.velocity_nodes[i].x;
        quad[2 * i + 1] = 0.0;
    }

    std::mt19937 gen(3);
    std::uniform_real_distribution<double> ux(0.0, 1.2), uy(0.0, 1.0);
    SolidMesh probe;
    for (int i = 0; i < 200; ++i) probe.ref_coords.push_back({ux(gen), uy(gen)});
    probe.cur_coords = probe.ref_coords;
    const auto map = build_nodal_map(bg, probe);

    for (int i = 0; i < map.size(); ++i) {
        const auto& rec = map.records[i];
        const auto [vc, gc] = interp_at(rec, constant);
        CHECK(std::abs(vc.x - 3.25) < 1e-12);
        CHECK(std::abs(vc.y + 1.5) < 1e-12);
        CHECK(max_abs(gc) < 1e-11);

        const auto [vl, gl] = interp_at(rec, linear);
        CHECK(std::abs(vl.x - probe.ref_coords[i].x) < 1e-12);
        CHECK(std::abs(gl(0, 0) - 1.0) < 1e-11);
        CHECK(std::abs(gl(0, 1)) < 1e-11);
        CHECK(std::abs(gl(1, 0)) < 1e-11);
        CHECK(std::abs(gl(1, 1)) < 1e-11);

        const double x = probe.ref_coords[i].x;
        const auto [vq, gq] = interp_at(rec, quad);
        CHECK(std::abs(vq.x - x * x) < 1e-10);
        CHECK(std::abs(gq(0, 0) - 2.0 * x) < 1e-10);
    }
}

TEST_CASE("distribute_to_background is the exact adjoint of interpolation") {
    const auto bg = build_background_grid(4, 4, Rect::unit());
    const int n = bg.n_vel_nodes();
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> u01(0.05, 0.95), ur(-1.0, 1.0);

    for (int trial = 0; trial < 100; ++trial) {
        SolidMesh probe;
        probe.ref_coords = {{u01(gen), u01(gen)}};
        probe.cur_coords = probe.ref_coords;
        const auto map = build_nodal_map(bg, probe);
        const auto& rec = map.records[0];

        std::vector<double> u(2 * n);
        for (auto& v : u) v = ur(gen);
        const Vec2 g{ur(gen), ur(gen)};

        std::vector<double> dist(2 * n, 0.0);
        distribute_to_background(rec, g, dist);
        double lhs = 0.0;
        for (int i = 0; i < 2 * n; ++i) lhs += dist[i] * u[i];
        const Vec2 interp = interp_value(rec, u);
        const double rhs = dot(g, interp);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
}

TEST_CASE("unit load at a velocity node lands on that node only") {
    const auto bg = build_background_grid(3, 3, Rect::unit());
    const int target = bg.vel_node_index(2, 4);
    SolidMesh probe;
    probe.ref_coords = {bg.velocity_nodes[target]};
    probe.cur_coords = probe.ref_coords;
    const auto map = build_nodal_map(bg, probe);

    std::vector<double> out(bg.n_vel_dofs(), 0.0);
    distribute_to_background(map.records[0], {1.0, 0.0}, out);
    for (int i = 0; i < bg.n_vel_nodes(); ++i) {
        CHECK(std::abs(out[2 * i] - (i == target ? 1.0 : 0.0)) < 1e-12);
        CHECK(std::abs(out[2 * i + 1]) < 1e-12);
    }
}

TEST_CASE("zero load distributes to nothing") {
    const auto bg = build_background_grid(2, 2, Rect::unit());
    SolidMesh probe;
    probe.ref_coords = {{0.3, 0.7}};
    probe.cur_coords = probe.ref_coords;
    const auto map = build_nodal_map(bg, probe);
    std::vector<double> out(bg.n_vel_dofs(), 0.0);
    distribute_to_background(map.records[0], {0.0, 0.0}, out);
    for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("transfer map records stale revision after the solid moves") {
    const auto bg = build_background_grid(4, 4, Rect::unit());
    auto disc = build_disc_mesh({0.5, 0.5}, 0.2, 64);
    const auto map = build_transfer_map(bg, disc, triangle_3pt());
    CHECK_FALSE(map.stale_for(disc));
    disc.touch();
    CHECK(map.stale_for(disc));
}
