#pragma once

#include "fsim/runner.hpp"

namespace fsim {

/// ||u_a - u_b|| / ||u_a|| over solid node velocities at the snapshot nearest t.
/// Both series must hold a snapshot within half their spacing of t.
double metric_relative_diff(const TimeSeries& a, const TimeSeries& b, double t);

/// ||d_a - d_b|| over solid node displacements (cur - ref) at time t.
double metric_displacement_diff(const TimeSeries& a, const TimeSeries& b, double t);

/// Node index of the leaflet tip (largest reference y; middle x on ties).
int tip_node(const TimeSeries& ts);

/// Displacement of one solid node at the snapshot nearest t.
Vec2 node_displacement(const TimeSeries& ts, double t, int node);

} // namespace fsim
