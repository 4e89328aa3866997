#include "fsim/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fsim/errors.hpp"
#include "fsim/mesh.hpp"

namespace fsim {

namespace fs = std::filesystem;

std::string format_17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", v);
    return buf;
}

namespace {

std::string snapshot_name(const char* prefix, int idx) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s_%04d.vtk", prefix, idx);
    return buf;
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write file '" + p.string() + "'");
    return out;
}

void write_metrics_csv(const TimeSeries& ts, const fs::path& path) {
    auto out = open_out(path);
    out << "t,solid_velocity_norm,divergence_residual,fp_iterations\n";
    for (const auto& s : ts.snapshots) {
        out << format_17(s.t) << ',' << format_17(s.velocity_norm) << ','
            << format_17(s.div_residual) << ',' << s.fp_iterations << '\n';
    }
}

void write_solid_vtk(const TimeSeries& ts, const TimeSeriesEntry& s, const fs::path& path) {
    auto out = open_out(path);
    const std::size_t n = s.coords.size();
    out << "# vtk DataFile Version 3.0\nsolid mesh snapshot t=" << format_17(s.t)
        << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << n << " double\n";
    for (const auto& p : s.coords)
        out << format_17(p.x) << ' ' << format_17(p.y) << " 0.0\n";
    out << "CELLS " << ts.triangles.size() << ' ' << 4 * ts.triangles.size() << '\n';
    for (const auto& t : ts.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    out << "CELL_TYPES " << ts.triangles.size() << '\n';
    for (std::size_t i = 0; i < ts.triangles.size(); ++i) out << "5\n";
    out << "POINT_DATA " << n << "\nVECTORS velocity double\n";
    for (const auto& v : s.velocities)
        out << format_17(v.x) << ' ' << format_17(v.y) << " 0.0\n";
    out << "VECTORS displacement double\n";
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 d = s.coords[i] - ts.ref_coords[i];
        out << format_17(d.x) << ' ' << format_17(d.y) << " 0.0\n";
    }
}

void write_fluid_vtk(const TimeSeries& ts, const TimeSeriesEntry& s, const fs::path& path) {
    const int nx = ts.background.nx, ny = ts.background.ny;
    const int vx = 2 * nx + 1, vy = 2 * ny + 1;
    const Rect dom = ts.background.domain;
    auto out = open_out(path);
    out << "# vtk DataFile Version 3.0\nbackground field snapshot t=" << format_17(s.t)
        << "\nASCII\nDATASET STRUCTURED_GRID\n";
    out << "DIMENSIONS " << vx << ' ' << vy << " 1\n";
    out << "POINTS " << vx * vy << " double\n";
    for (int gy = 0; gy < vy; ++gy)
        for (int gx = 0; gx < vx; ++gx)
            out << format_17(dom.x0 + 0.5 * gx * dom.width() / nx) << ' '
                << format_17(dom.y0 + 0.5 * gy * dom.height() / ny) << " 0.0\n";
    out << "POINT_DATA " << vx * vy << "\nVECTORS velocity double\n";
    for (int i = 0; i < vx * vy; ++i)
        out << format_17(s.u[2 * i]) << ' ' << format_17(s.u[2 * i + 1]) << " 0.0\n";
    out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    // Bilinear pressure evaluated on the velocity lattice (exact at mid-edges
    // and centers of the Q1 field).
    const auto pval = [&](int px, int py) { return s.p[py * (nx + 1) + px]; };
    for (int gy = 0; gy < vy; ++gy) {
        for (int gx = 0; gx < vx; ++gx) {
            const int ex = gx / 2, ey = gy / 2;
            double v;
            if (gx % 2 == 0 && gy % 2 == 0) {
                v = pval(ex, ey);
            } else if (gx % 2 == 1 && gy % 2 == 0) {
                v = 0.5 * (pval(ex, ey) + pval(ex + 1, ey));
            } else if (gx % 2 == 0 && gy % 2 == 1) {
                v = 0.5 * (pval(ex, ey) + pval(ex, ey + 1));
            } else {
                v = 0.25 * (pval(ex, ey) + pval(ex + 1, ey) + pval(ex, ey + 1) +
                            pval(ex + 1, ey + 1));
            }
            out << format_17(v) << '\n';
        }
    }
}

void write_plot_script(const fs::path& path) {
    auto out = open_out(path);
    out << "# Regenerates the norm-vs-time figure from metrics.csv\n"
           "set datafile separator ','\n"
           "set xlabel 't'\n"
           "set ylabel 'solid velocity norm'\n"
           "set grid\n"
           "set terminal pngcairo size 900,600\n"
           "set output 'norm_vs_time.png'\n"
           "plot 'metrics.csv' using 1:2 skip 1 with lines title 'solid velocity norm'\n";
}

} // namespace

void write_outputs(const TimeSeries& ts, const std::string& out_dir) {
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir))
        throw std::runtime_error("cannot create output directory '" + out_dir + "': " +
                                 ec.message());

    write_metrics_csv(ts, dir / "metrics.csv");
    for (std::size_t i = 0; i < ts.snapshots.size(); ++i) {
        const auto& s = ts.snapshots[i];
        write_solid_vtk(ts, s, dir / snapshot_name("solid", static_cast<int>(i)));
        if (!s.u.empty()) write_fluid_vtk(ts, s, dir / snapshot_name("fluid", static_cast<int>(i)));
    }
    write_plot_script(dir / "plot.gp");
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

void read_solid_vtk(const fs::path& path, TimeSeries& ts, TimeSeriesEntry& e) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
    std::string tok;
    auto expect_section = [&](const std::string& word) {
        while (in >> tok)
            if (tok == word) return true;
        return false;
    };
    if (!expect_section("POINTS")) throw std::runtime_error("no POINTS in " + path.string());
    std::size_t n;
    in >> n >> tok;
    e.coords.resize(n);
    for (auto& p : e.coords) {
        double z;
        in >> p.x >> p.y >> z;
    }
    if (!expect_section("CELLS")) throw std::runtime_error("no CELLS in " + path.string());
    std::size_t m, total;
    in >> m >> total;
    if (ts.triangles.empty()) {
        ts.triangles.resize(m);
        for (auto& t : ts.triangles) {
            int k;
            in >> k >> t[0] >> t[1] >> t[2];
        }
    } else {
        for (std::size_t i = 0; i < m; ++i) {
            int k, a, b, c;
            in >> k >> a >> b >> c;
        }
    }
    if (!expect_section("velocity")) throw std::runtime_error("no velocity in " + path.string());
    in >> tok; // type
    e.velocities.resize(n);
    for (auto& v : e.velocities) {
        double z;
        in >> v.x >> v.y >> z;
    }
    if (!expect_section("displacement"))
        throw std::runtime_error("no displacement in " + path.string());
    in >> tok;
    if (ts.ref_coords.empty()) {
        ts.ref_coords.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            Vec2 d;
            double z;
            in >> d.x >> d.y >> z;
            ts.ref_coords[i] = e.coords[i] - d;
        }
    }
}

} // namespace

TimeSeries read_outputs(const std::string& dir) {
    const fs::path base(dir);
    std::ifstream csv(base / "metrics.csv");
    if (!csv) throw std::runtime_error("cannot read '" + (base / "metrics.csv").string() + "'");

    TimeSeries ts;
    std::string line;
    std::getline(csv, line); // header
    int idx = 0;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        const auto cols = split(line, ',');
        if (cols.size() != 4)
            throw std::runtime_error("metrics.csv: expected 4 columns, got " +
                                     std::to_string(cols.size()));
        TimeSeriesEntry e;
        e.t = std::stod(cols[0]);
        e.velocity_norm = std::stod(cols[1]);
        e.div_residual = std::stod(cols[2]);
        e.fp_iterations = std::stoi(cols[3]);
        const fs::path solid = base / snapshot_name("solid", idx);
        if (fs::exists(solid)) read_solid_vtk(solid, ts, e);
        ts.snapshots.push_back(std::move(e));
        ++idx;
    }
    return ts;
}

} // namespace fsim
