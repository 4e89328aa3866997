#pragma once

#include <string>

#include "fsim/runner.hpp"

namespace fsim {

/// Writes metrics.csv, solid_NNNN.vtk / fluid_NNNN.vtk snapshot files (legacy
/// ASCII), and plot.gp into out_dir. Numbers carry 17 significant digits so
/// values round-trip bit-exactly through the text.
void write_outputs(const TimeSeries& series, const std::string& out_dir);

/// Reads a directory produced by write_outputs back into a TimeSeries
/// (solid geometry, velocities, displacements, and the csv columns).
TimeSeries read_outputs(const std::string& dir);

/// 17-significant-digit decimal text for a double ('.' decimal point).
std::string format_17(double v);

} // namespace fsim
