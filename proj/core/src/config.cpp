#include "fsim/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "fsim/errors.hpp"

namespace fsim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("value '" + v + "' for key '" + key + "' is not a number", line);
    }
}

int parse_int(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        throw ConfigError("value '" + v + "' for key '" + key + "' is not an integer", line);
    }
}

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const int sub = prev[j - 1] + (a[i - 1] != b[j - 1]);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

using Setter = std::function<void(BenchmarkCase&, const std::string&, int)>;

const std::map<std::string, Setter>& key_table() {
    static const std::map<std::string, Setter> table = {
        {"scheme",
         [](BenchmarkCase& c, const std::string& v, int line) {
             const auto s = scheme_from_string(v);
             if (!s)
                 throw ConfigError("unknown scheme '" + v +
                                       "' (expected explicit-ifem, implicit-ifem or one-field-fdm)",
                                   line);
             c.scheme.scheme = *s;
         }},
        {"dt", [](BenchmarkCase& c, const std::string& v, int l) { c.scheme.dt = parse_double(v, "dt", l); }},
        {"t_end", [](BenchmarkCase& c, const std::string& v, int l) { c.scheme.t_end = parse_double(v, "t_end", l); }},
        {"re", [](BenchmarkCase& c, const std::string& v, int l) { c.scheme.re = parse_double(v, "re", l); }},
        {"c1_tilde", [](BenchmarkCase& c, const std::string& v, int l) { c.scheme.c1_tilde = parse_double(v, "c1_tilde", l); }},
        {"rho_r", [](BenchmarkCase& c, const std::string& v, int l) { c.scheme.rho_r = parse_double(v, "rho_r", l); }},
        {"mu_r", [](BenchmarkCase& c, const std::string& v, int l) { c.scheme.mu_r = parse_double(v, "mu_r", l); }},
        {"fr", [](BenchmarkCase& c, const std::string& v, int l) { c.scheme.fr = parse_double(v, "fr", l); }},
        {"fp_tol", [](BenchmarkCase& c, const std::string& v, int l) { c.scheme.fp_tol = parse_double(v, "fp_tol", l); }},
        {"fp_max_iters", [](BenchmarkCase& c, const std::string& v, int l) { c.scheme.fp_max_iters = parse_int(v, "fp_max_iters", l); }},
        {"lin_tol", [](BenchmarkCase& c, const std::string& v, int l) { c.scheme.lin_tol = parse_double(v, "lin_tol", l); }},
        {"pressure_tol", [](BenchmarkCase& c, const std::string& v, int l) { c.scheme.pressure_tol = parse_double(v, "pressure_tol", l); }},
        {"grid_nx", [](BenchmarkCase& c, const std::string& v, int l) { c.grid_nx = parse_int(v, "grid_nx", l); }},
        {"grid_ny", [](BenchmarkCase& c, const std::string& v, int l) { c.grid_ny = parse_int(v, "grid_ny", l); }},
        {"disc_cx", [](BenchmarkCase& c, const std::string& v, int l) { c.disc_center.x = parse_double(v, "disc_cx", l); }},
        {"disc_cy", [](BenchmarkCase& c, const std::string& v, int l) { c.disc_center.y = parse_double(v, "disc_cy", l); }},
        {"disc_radius", [](BenchmarkCase& c, const std::string& v, int l) { c.disc_radius = parse_double(v, "disc_radius", l); }},
        {"disc_triangles", [](BenchmarkCase& c, const std::string& v, int l) { c.disc_triangles = parse_int(v, "disc_triangles", l); }},
        {"lid_ux", [](BenchmarkCase& c, const std::string& v, int l) { c.lid_velocity.x = parse_double(v, "lid_ux", l); }},
        {"lid_uy", [](BenchmarkCase& c, const std::string& v, int l) { c.lid_velocity.y = parse_double(v, "lid_uy", l); }},
        {"leaflet_width", [](BenchmarkCase& c, const std::string& v, int l) { c.leaflet_width = parse_double(v, "leaflet_width", l); }},
        {"leaflet_height", [](BenchmarkCase& c, const std::string& v, int l) { c.leaflet_height = parse_double(v, "leaflet_height", l); }},
        {"leaflet_base_x", [](BenchmarkCase& c, const std::string& v, int l) { c.leaflet_base_x = parse_double(v, "leaflet_base_x", l); }},
        {"leaflet_triangles", [](BenchmarkCase& c, const std::string& v, int l) { c.leaflet_triangles = parse_int(v, "leaflet_triangles", l); }},
        {"inflow_period", [](BenchmarkCase& c, const std::string& v, int l) { c.inflow_period = parse_double(v, "inflow_period", l); }},
    };
    return table;
}

void validate_case(const BenchmarkCase& c) {
    try {
        c.scheme.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (c.grid_nx < 1 || c.grid_ny < 1) throw ConfigError("grid_nx/grid_ny must be >= 1");
    if (c.kind == BenchmarkKind::cavity_disc && c.disc_radius <= 0.0)
        throw ConfigError("disc_radius must be positive");
    if (c.kind == BenchmarkKind::leaflet && c.inflow_period <= 0.0)
        throw ConfigError("inflow_period must be positive");
}

} // namespace

BenchmarkCase parse_config_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_preset = false;
    BenchmarkCase c;

    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key before '='", line_no);
        if (value.empty()) throw ConfigError("missing value for key '" + key + "'", line_no);

        if (key == "preset") {
            if (have_preset) throw ConfigError("duplicate preset key", line_no);
            c = preset(value); // throws with the registry on unknown names
            have_preset = true;
            continue;
        }
        const auto it = key_table().find(key);
        if (it == key_table().end()) {
            std::string best = "preset";
            int best_d = edit_distance(key, "preset");
            for (const auto& [k, _] : key_table()) {
                const int d = edit_distance(key, k);
                if (d < best_d) {
                    best_d = d;
                    best = k;
                }
            }
            throw ConfigError("unknown key '" + key + "' (did you mean '" + best + "'?)", line_no);
        }
        if (!have_preset)
            throw ConfigError("the first setting must be 'preset = <name>'", line_no);
        it->second(c, value, line_no);
    }
    if (!have_preset) throw ConfigError("config does not select a preset");
    validate_case(c);
    return c;
}

BenchmarkCase parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace fsim
