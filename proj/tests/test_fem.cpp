#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <random>

#include "fsim/fem.hpp"
#include "fsim/linalg.hpp"
#include "support/oracle.hpp"

using namespace fsim;

namespace {

std::vector<double> field_from(const BackgroundMesh& bg, Vec2 (*f)(const Vec2&)) {
    std::vector<double> u(bg.n_vel_dofs());
    for (int i = 0; i < bg.n_vel_nodes(); ++i) {
        const Vec2 v = f(bg.velocity_nodes[i]);
        u[2 * i] = v.x;
        u[2 * i + 1] = v.y;
    }
    return u;
}

} // namespace

TEST_CASE("mass matrix integrates the domain area per component") {
    const auto bg = build_background_grid(1, 1, Rect::unit());
    const auto M = assemble_mass(bg);
    double sx = 0.0, sy = 0.0;
    for (int r = 0; r < M.rows(); ++r)
        for (int k = M.pattern->row_ptr[r]; k < M.pattern->row_ptr[r + 1]; ++k)
            (r % 2 == 0 ? sx : sy) += M.values[k];
    CHECK(sx == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sy == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mass matrix is SPD") {
    const auto bg = build_background_grid(3, 2, Rect{0.0, 0.0, 1.5, 1.0});
    const auto M = assemble_mass(bg);
    CHECK(symmetry_defect(M) < 1e-14);

    std::mt19937 gen(5);
    std::uniform_real_distribution<double> ur(-1.0, 1.0);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> u(bg.n_vel_dofs());
        for (auto& v : u) v = ur(gen);
        std::vector<double> Mu(u.size());
        matvec(M, u, Mu);
        CHECK(vec_dot(u, Mu) > 0.0);
    }

    // smallest eigenvalue on a small mesh by dense eigensolve
    const auto small = build_background_grid(3, 3, Rect::unit());
    const Eigen::MatrixXd D = oracle::to_dense(assemble_mass(small));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(D);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("assembled operators match the dense quadrature oracle") {
    for (auto [nx, ny] : {std::pair{1, 1}, {2, 3}, {4, 4}}) {
        const auto bg = build_background_grid(nx, ny, Rect{0.0, 0.0, 1.1, 0.8});
        const double scale_m = (oracle::to_dense(assemble_mass(bg))).cwiseAbs().maxCoeff();
        CHECK((oracle::to_dense(assemble_mass(bg)) - oracle::dense_mass(bg)).cwiseAbs().maxCoeff() <
              1e-12 * std::max(1.0, scale_m));
        CHECK((oracle::to_dense(assemble_diffusion(bg, 0.37)) - oracle::dense_diffusion(bg, 0.37))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
        CHECK((oracle::to_dense(assemble_divergence(bg)) - oracle::dense_divergence(bg))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
    }
}

TEST_CASE("diffusion operator annihilates rigid motions") {
    const auto bg = build_background_grid(4, 3, Rect{0.0, 0.0, 2.0, 1.0});
    const auto K = assemble_diffusion(bg, 1.0);
    CHECK(symmetry_defect(K) < 1e-12);

    const auto constant = field_from(bg, +[](const Vec2&) { return Vec2{1.3, -0.4}; });
    std::vector<double> Ku(constant.size());
    matvec(K, constant, Ku);
    CHECK(vec_norm(Ku) < 1e-12);

    const auto rotation = field_from(bg, +[](const Vec2& p) { return Vec2{-p.y, p.x}; });
    matvec(K, rotation, Ku);
    CHECK(vec_norm(Ku) < 1e-10);
}

TEST_CASE("diffusion energy matches dense quadrature for a linear field") {
    const auto bg = build_background_grid(3, 3, Rect::unit());
    const auto K = assemble_diffusion(bg, 1.0);
    const auto u = field_from(bg, +[](const Vec2& p) { return Vec2{p.x, -p.y}; });
    std::vector<double> Ku(u.size());
    matvec(K, u, Ku);
    const double energy = vec_dot(u, Ku);
    // D(x,-y) = diag(2,-2): |D|^2 = 8 over the unit square.
    CHECK(energy == doctest::Approx(8.0).epsilon(1e-12));

    Eigen::Map<const Eigen::VectorXd> uv(u.data(), u.size());
    const double dense_energy = uv.dot(oracle::dense_diffusion(bg, 1.0) * uv);
    CHECK(energy == doctest::Approx(dense_energy).epsilon(1e-12));
}

TEST_CASE("divergence operator on constant, divergence-free and expanding fields") {
    const auto bg = build_background_grid(3, 4, Rect::unit());
    const auto B = assemble_divergence(bg);

    const auto constant = field_from(bg, +[](const Vec2&) { return Vec2{0.7, -2.0}; });
    std::vector<double> Bu(bg.n_pres_nodes());
    matvec(B, constant, Bu);
    CHECK(vec_norm(Bu) < 1e-13);

    const auto solenoidal = field_from(bg, +[](const Vec2& p) { return Vec2{p.x, -p.y}; });
    matvec(B, solenoidal, Bu);
    CHECK(vec_norm(Bu) < 1e-13);

    const auto expanding = field_from(bg, +[](const Vec2& p) { return Vec2{p.x, p.y}; });
    matvec(B, expanding, Bu);
    double total = 0.0;
    for (double v : Bu) total += v;
    CHECK(total == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("dirichlet elimination keeps symmetry and pins values exactly") {
    const auto bg = build_background_grid(3, 3, Rect::unit());
    SparseSystem sys;
    sys.A = add_matrices(assemble_mass(bg), assemble_diffusion(bg, 0.5));
    sys.rhs.assign(bg.n_vel_dofs(), 1.0);
    sys.layout = {bg.n_vel_nodes(), bg.n_pres_nodes()};

    std::vector<int> nodes;
    std::vector<Vec2> values;
    for (int n = 0; n < bg.n_vel_nodes(); ++n) {
        if (bg.dirichlet_tags[n]) {
            nodes.push_back(n);
            values.push_back({0.0, 0.0});
        }
    }
    apply_dirichlet(sys, bg, nodes, values);
    CHECK(symmetry_defect(sys.A) < 1e-14);

    // constrained rows are identity rows
    for (int n : nodes) {
        for (int c = 0; c < 2; ++c) {
            const int dof = 2 * n + c;
            for (int k = sys.A.pattern->row_ptr[dof]; k < sys.A.pattern->row_ptr[dof + 1]; ++k) {
                const double expected = (sys.A.pattern->col_idx[k] == dof) ? 1.0 : 0.0;
                CHECK(sys.A.values[k] == expected);
            }
        }
    }

    const auto x = dense_solve(sys.A, sys.rhs);
    for (int n : nodes) {
        CHECK(x[2 * n] == 0.0);
        CHECK(x[2 * n + 1] == 0.0);
    }
    CHECK_THROWS_AS(apply_dirichlet(sys, bg, std::vector<int>{bg.n_vel_nodes() + 5},
                                    std::vector<Vec2>{{0, 0}}),
                    std::invalid_argument);
}

TEST_CASE("edge-to-edge diffusion solve obeys the discrete maximum principle") {
    const auto bg = build_background_grid(4, 4, Rect::unit());
    SparseSystem sys;
    sys.A = assemble_diffusion(bg, 1.0);
    sys.rhs.assign(bg.n_vel_dofs(), 0.0);

    // u = 1 on the left edge, u = 0 on the right; the top/bottom walls carry
    // the linear interpolant so the boundary data is harmonic-compatible.
    std::vector<int> nodes;
    std::vector<Vec2> values;
    for (int n = 0; n < bg.n_vel_nodes(); ++n) {
        if (!bg.dirichlet_tags[n]) continue;
        nodes.push_back(n);
        const double g = 1.0 - bg.velocity_nodes[n].x;
        values.push_back({g, g});
    }
    apply_dirichlet(sys, bg, nodes, values);
    const auto x = dense_solve(sys.A, sys.rhs);

    const int vx = 2 * bg.nx + 1;
    for (int gy = 0; gy < 2 * bg.ny + 1; ++gy) {
        double prev = 1.0 + 1e-12;
        for (int gx = 0; gx < vx; ++gx) {
            const double v = x[2 * bg.vel_node_index(gx, gy)];
            CHECK(v >= -1e-10);
            CHECK(v <= 1.0 + 1e-10);
            CHECK(v <= prev + 1e-9); // monotone along the row
            prev = v;
        }
    }
}

TEST_CASE("enclosed-flow Schur complement has exactly one zero singular value") {
    const auto bg = build_background_grid(4, 4, Rect::unit());
    const auto M = oracle::dense_mass(bg);
    const auto B = oracle::dense_divergence(bg);

    // eliminate all boundary dofs (enclosed flow): restrict to free velocity dofs
    std::vector<int> free;
    for (int n = 0; n < bg.n_vel_nodes(); ++n)
        if (!bg.dirichlet_tags[n]) {
            free.push_back(2 * n);
            free.push_back(2 * n + 1);
        }
    Eigen::MatrixXd Mf(free.size(), free.size());
    Eigen::MatrixXd Bf(bg.n_pres_nodes(), free.size());
    for (std::size_t i = 0; i < free.size(); ++i) {
        for (std::size_t j = 0; j < free.size(); ++j) Mf(i, j) = M(free[i], free[j]);
        Bf.col(i) = B.col(free[i]);
    }
    const Eigen::MatrixXd S = Bf * Mf.llt().solve(Bf.transpose());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(S);
    const auto& sigma = svd.singularValues();
    const double scale = sigma(0);
    CHECK(sigma(sigma.size() - 1) < 1e-8 * scale);
    CHECK(sigma(sigma.size() - 2) > 1e-8 * scale);
}

TEST_CASE("neumann boundary load integrates the traction") {
    const auto bg = build_background_grid(3, 2, Rect{0.0, 0.0, 3.0, 1.0});
    const Vec2 hbar{2.0, -1.0};
    const auto rhs = assemble_neumann(bg, boundary_top, hbar);
    double fx = 0.0, fy = 0.0;
    for (int n = 0; n < bg.n_vel_nodes(); ++n) {
        fx += rhs[2 * n];
        fy += rhs[2 * n + 1];
        if (!(bg.dirichlet_tags[n] & boundary_top)) {
            CHECK(rhs[2 * n] == 0.0);
            CHECK(rhs[2 * n + 1] == 0.0);
        }
    }
    CHECK(fx == doctest::Approx(hbar.x * 3.0).epsilon(1e-13)); // edge length 3
    CHECK(fy == doctest::Approx(hbar.y * 3.0).epsilon(1e-13));
}
