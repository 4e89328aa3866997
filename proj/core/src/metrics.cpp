#include "fsim/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fsim {

namespace {

const TimeSeriesEntry& snapshot_at(const TimeSeries& ts, double t, const char* what) {
    const int idx = ts.find_snapshot(t);
    if (idx < 0)
        throw std::invalid_argument(std::string(what) + ": no snapshot near t=" + std::to_string(t));
    return ts.snapshots[idx];
}

} // namespace

double metric_relative_diff(const TimeSeries& a, const TimeSeries& b, double t) {
    const auto& sa = snapshot_at(a, t, "metric_relative_diff");
    const auto& sb = snapshot_at(b, t, "metric_relative_diff");
    if (sa.velocities.size() != sb.velocities.size())
        throw std::invalid_argument("metric_relative_diff: solid node counts differ");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < sa.velocities.size(); ++i) {
        const Vec2 d = sa.velocities[i] - sb.velocities[i];
        num += dot(d, d);
        den += dot(sa.velocities[i], sa.velocities[i]);
    }
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

double metric_displacement_diff(const TimeSeries& a, const TimeSeries& b, double t) {
    const auto& sa = snapshot_at(a, t, "metric_displacement_diff");
    const auto& sb = snapshot_at(b, t, "metric_displacement_diff");
    if (sa.coords.size() != sb.coords.size() || a.ref_coords.size() != b.ref_coords.size())
        throw std::invalid_argument("metric_displacement_diff: solid node counts differ");
    double num = 0.0;
    for (std::size_t i = 0; i < sa.coords.size(); ++i) {
        const Vec2 da = sa.coords[i] - a.ref_coords[i];
        const Vec2 db = sb.coords[i] - b.ref_coords[i];
        const Vec2 d = da - db;
        num += dot(d, d);
    }
    return std::sqrt(num);
}

int tip_node(const TimeSeries& ts) {
    if (ts.ref_coords.empty()) throw std::invalid_argument("tip_node: empty series");
    double x_lo = ts.ref_coords[0].x, x_hi = ts.ref_coords[0].x;
    for (const auto& p : ts.ref_coords) {
        x_lo = std::min(x_lo, p.x);
        x_hi = std::max(x_hi, p.x);
    }
    const double x_mid = 0.5 * (x_lo + x_hi);
    int best = 0;
    for (std::size_t i = 1; i < ts.ref_coords.size(); ++i) {
        const auto& p = ts.ref_coords[i];
        const auto& q = ts.ref_coords[best];
        if (p.y > q.y + 1e-14 ||
            (std::abs(p.y - q.y) <= 1e-14 && std::abs(p.x - x_mid) < std::abs(q.x - x_mid)))
            best = static_cast<int>(i);
    }
    return best;
}

Vec2 node_displacement(const TimeSeries& ts, double t, int node) {
    const auto& s = snapshot_at(ts, t, "node_displacement");
    if (node < 0 || node >= static_cast<int>(s.coords.size()))
        throw std::invalid_argument("node_displacement: node out of range");
    return s.coords[node] - ts.ref_coords[node];
}

} // namespace fsim
