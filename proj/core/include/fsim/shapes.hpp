#pragma once

#include <array>

#include "fsim/geometry.hpp"

namespace fsim {

// Reference-element shape functions on [-1,1]^2. Local node ordering is
// lattice row-major: node l = 3*jy + jx for Q2 (jx,jy in {0,1,2}) and
// l = 2*iy + ix for Q1 (ix,iy in {0,1}), matching the nested background lattices.

/// Biquadratic (9-node) values at a reference point.
std::array<double, 9> q2_values(const Vec2& xi);

/// Biquadratic gradients with respect to reference coordinates.
std::array<Vec2, 9> q2_ref_gradients(const Vec2& xi);

/// Bilinear (4-node) values at a reference point.
std::array<double, 4> q1_values(const Vec2& xi);

/// 1D quadratic Lagrange values on [-1,1], nodes at {-1,0,1}.
std::array<double, 3> quad1d_values(double xi);

/// Linear triangle values at barycentric-style local coordinates (L2, L3),
/// nodes at {(0,0),(1,0),(0,1)} of the unit triangle.
inline std::array<double, 3> p1_values(const Vec2& xi) {
    return {1.0 - xi.x - xi.y, xi.x, xi.y};
}

} // namespace fsim
