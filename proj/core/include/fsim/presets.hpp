#pragma once

#include <string>
#include <vector>

#include "fsim/mesh.hpp"
#include "fsim/schemes.hpp"

namespace fsim {

enum class BenchmarkKind { cavity_disc, leaflet };

/// Fully resolved benchmark description: geometry, meshes, parameters.
struct BenchmarkCase {
    std::string name;
    BenchmarkKind kind = BenchmarkKind::cavity_disc;
    Rect domain = Rect::unit();
    int grid_nx = 40;
    int grid_ny = 40;

    // cavity-disc geometry
    Vec2 disc_center{0.6, 0.5};
    double disc_radius = 0.2;
    int disc_triangles = 1373;
    Vec2 lid_velocity{1.0, 0.0};

    // leaflet geometry
    double leaflet_width = 0.0212;
    double leaflet_height = 0.8;
    double leaflet_base_x = 2.0 - 0.0212 / 2.0;
    int leaflet_triangles = 152;
    double inflow_period = 10.0;

    SchemeConfig scheme;
};

/// Named parameter sets: cavity-1..7 and leaflet-1..3 (plus "-coarse" twins at
/// half resolution and shortened horizon). Unknown names raise ConfigError
/// listing the registry.
BenchmarkCase preset(const std::string& name);
std::vector<std::string> preset_names();

/// Periodic channel inflow: u_x = 1.5 y (2-y) sin(2 pi t / T), u_y = 0.
Vec2 inflow_profile(double y, double t, double period);

BackgroundMesh make_background(const BenchmarkCase& c);
SolidMesh make_solid(const BenchmarkCase& c);
DirichletBC make_boundary_conditions(const BenchmarkCase& c, const BackgroundMesh& bg);
Simulator make_simulator(const BenchmarkCase& c);

} // namespace fsim
