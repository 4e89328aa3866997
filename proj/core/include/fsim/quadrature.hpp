#pragma once

#include <vector>

#include "fsim/geometry.hpp"

namespace fsim {

/// Quadrature rule on a reference element. Weights are positive and sum to the
/// reference measure (4 for the [-1,1]^2 quadrilateral, 1/2 for the unit triangle).
struct QuadratureRule {
    std::vector<Vec2> points;
    std::vector<double> weights;
    int exact_degree = 0;

    std::size_t size() const { return points.size(); }
};

/// 3x3 Gauss-Legendre on [-1,1]^2; exact through degree 5 per axis.
QuadratureRule quad_gauss_3x3();

/// 2-point Gauss-Legendre on [-1,1] (for boundary edge integrals); degree 3.
QuadratureRule quad_gauss_edge_3();

/// 3-point rule on the unit triangle {(0,0),(1,0),(0,1)}; exact for degree 2.
QuadratureRule triangle_3pt();

} // namespace fsim
