#include "fsim/quadrature.hpp"

#include <cmath>

namespace fsim {

QuadratureRule quad_gauss_3x3() {
    const double a = std::sqrt(3.0 / 5.0);
    const double g[3] = {-a, 0.0, a};
    const double w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    QuadratureRule rule;
    rule.exact_degree = 5;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
            rule.points.push_back({g[i], g[j]});
            rule.weights.push_back(w[i] * w[j]);
        }
    return rule;
}

QuadratureRule quad_gauss_edge_3() {
    const double a = std::sqrt(3.0 / 5.0);
    QuadratureRule rule;
    rule.exact_degree = 5;
    rule.points = {{-a, 0.0}, {0.0, 0.0}, {a, 0.0}};
    rule.weights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    return rule;
}

QuadratureRule triangle_3pt() {
    QuadratureRule rule;
    rule.exact_degree = 2;
    rule.points = {{1.0 / 6.0, 1.0 / 6.0}, {2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0}};
    rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    return rule;
}

} // namespace fsim
