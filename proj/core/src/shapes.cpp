#include "fsim/shapes.hpp"

namespace fsim {

namespace {

inline std::array<double, 3> lag2(double x) {
    return {0.5 * x * (x - 1.0), 1.0 - x * x, 0.5 * x * (x + 1.0)};
}

inline std::array<double, 3> lag2_d(double x) {
    return {x - 0.5, -2.0 * x, x + 0.5};
}

} // namespace

std::array<double, 3> quad1d_values(double xi) { return lag2(xi); }

std::array<double, 9> q2_values(const Vec2& xi) {
    const auto nx = lag2(xi.x);
    const auto ny = lag2(xi.y);
    std::array<double, 9> v;
    for (int jy = 0; jy < 3; ++jy)
        for (int jx = 0; jx < 3; ++jx) v[3 * jy + jx] = nx[jx] * ny[jy];
    return v;
}

std::array<Vec2, 9> q2_ref_gradients(const Vec2& xi) {
    const auto nx = lag2(xi.x);
    const auto ny = lag2(xi.y);
    const auto dx = lag2_d(xi.x);
    const auto dy = lag2_d(xi.y);
    std::array<Vec2, 9> g;
    for (int jy = 0; jy < 3; ++jy)
        for (int jx = 0; jx < 3; ++jx) g[3 * jy + jx] = {dx[jx] * ny[jy], nx[jx] * dy[jy]};
    return g;
}

std::array<double, 4> q1_values(const Vec2& xi) {
    const double mx = 0.5 * (1.0 - xi.x), px = 0.5 * (1.0 + xi.x);
    const double my = 0.5 * (1.0 - xi.y), py = 0.5 * (1.0 + xi.y);
    return {mx * my, px * my, mx * py, px * py};
}

} // namespace fsim
