// SPDX-License-Identifier: Apache-2.0
//
// riscontrol - dynamic control of reconfigurable intelligent surfaces
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "risc/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace risc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError("config: " + path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* k) { return it.key() == k; }) == allowed.end())
            fail(path, "unknown key \"" + it.key() + "\"");
    }
}

double get_double(const json& obj, const std::string& path, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

int get_int(const json& obj, const std::string& path, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<int>();
}

std::string get_string(const json& obj, const std::string& path, const char* key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

Vec3 get_vec3(const json& obj, const std::string& path, const char* key, const Vec3& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
        fail(path + "." + key, "expected [x, y, z]");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

std::vector<double> get_double_list(const json& obj, const std::string& path, const char* key) {
    std::vector<double> out;
    if (!obj.contains(key)) return out;
    const json& v = obj.at(key);
    if (!v.is_array()) fail(path + "." + key, "expected an array of numbers");
    for (const json& e : v) {
        if (!e.is_number()) fail(path + "." + key, "expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::vector<int> get_int_list(const json& obj, const std::string& path, const char* key, std::vector<int> fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_array()) fail(path + "." + key, "expected an array of integers");
    std::vector<int> out;
    for (const json& e : v) {
        if (!e.is_number_integer()) fail(path + "." + key, "expected an array of integers");
        out.push_back(e.get<int>());
    }
    return out;
}

void parse_scene(const json& obj, RunConfig& cfg) {
    const std::string path = "scene";
    check_keys(obj, path,
               {"f0_hz", "bs_rows", "bs_cols", "bs_spacing_m", "bs_position", "ris_rows", "ris_cols", "ris_side_m",
                "wall_width_m", "wall_height_m", "wall_center", "polarization", "power_dbm", "noise_dbm",
                "noise_sweep_dbm", "user_area", "user_height_m", "min_user_separation_m", "averaging", "quadrature",
                "zf_rtol"});
    SceneConfig& s = cfg.scene;
    s.f0_hz = get_double(obj, path, "f0_hz", s.f0_hz);
    s.bs_rows = get_int(obj, path, "bs_rows", s.bs_rows);
    s.bs_cols = get_int(obj, path, "bs_cols", s.bs_cols);
    s.bs_spacing_m = get_double(obj, path, "bs_spacing_m", s.bs_spacing_m);
    s.bs_position = get_vec3(obj, path, "bs_position", s.bs_position);
    s.ris_rows = get_int(obj, path, "ris_rows", s.ris_rows);
    s.ris_cols = get_int(obj, path, "ris_cols", s.ris_cols);
    s.ris_side_m = get_double(obj, path, "ris_side_m", s.ris_side_m);
    s.wall_width_m = get_double(obj, path, "wall_width_m", s.wall_width_m);
    s.wall_height_m = get_double(obj, path, "wall_height_m", s.wall_height_m);
    s.wall_center = get_vec3(obj, path, "wall_center", s.wall_center);
    s.polarization = get_vec3(obj, path, "polarization", s.polarization);
    s.user_height_m = get_double(obj, path, "user_height_m", s.user_height_m);
    s.min_user_separation_m = get_double(obj, path, "min_user_separation_m", s.min_user_separation_m);
    if (obj.contains("user_area")) {
        const json& v = obj.at("user_area");
        if (!v.is_array() || v.size() != 4) fail(path + ".user_area", "expected [x_min, x_max, y_min, y_max]");
        s.user_area = GroundRect{v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), v[3].get<double>()};
    }
    cfg.power_dbm = get_double(obj, path, "power_dbm", cfg.power_dbm);
    cfg.noise_dbm = get_double(obj, path, "noise_dbm", cfg.noise_dbm);
    cfg.power_w = dbm_to_watt(cfg.power_dbm);
    cfg.noise_w = dbm_to_watt(cfg.noise_dbm);
    cfg.noise_sweep_dbm = get_double_list(obj, path, "noise_sweep_dbm");
    // field averaging: "incident" (default) or {"two_sided": factor}
    if (obj.contains("averaging")) {
        const json& v = obj.at("averaging");
        if (v.is_string() && v.get<std::string>() == "incident") {
            s.averaging_factor = 1.0;
        } else if (v.is_object() && v.size() == 1 && v.contains("two_sided") && v.at("two_sided").is_number()) {
            s.averaging_factor = v.at("two_sided").get<double>();
            if (!(s.averaging_factor > 0.0)) fail(path + ".averaging", "two_sided factor must be positive");
        } else {
            fail(path + ".averaging", "expected \"incident\" or {\"two_sided\": factor}");
        }
    }
    s.quadrature_points = get_int(obj, path, "quadrature", s.quadrature_points);
    if (s.quadrature_points != 1 && s.quadrature_points != 2) fail(path + ".quadrature", "must be 1 or 2");
    cfg.zf_rtol = get_double(obj, path, "zf_rtol", cfg.zf_rtol);
    if (!(cfg.zf_rtol > 0.0) || cfg.zf_rtol >= 1.0) fail(path + ".zf_rtol", "must be in (0, 1)");
    if (!(s.f0_hz > 0.0)) fail(path + ".f0_hz", "must be positive");
    if (s.bs_rows < 1 || s.bs_cols < 1) fail(path + ".bs_rows", "array must have at least one element");
    if (!(s.ris_side_m > 0.0)) fail(path + ".ris_side_m", "must be positive");
}

void parse_table(const json& obj, RunConfig& cfg) {
    const std::string path = "table";
    check_keys(obj, path, {"bits", "amplitude", "path", "wall_thickness_m", "wall_eps_r", "wall_sigma_s_m"});
    cfg.table_bits = get_int(obj, path, "bits", cfg.table_bits);
    cfg.table_amplitude = get_double(obj, path, "amplitude", cfg.table_amplitude);
    cfg.table_path = get_string(obj, path, "path", cfg.table_path);
    cfg.wall_model.thickness_m = get_double(obj, path, "wall_thickness_m", cfg.wall_model.thickness_m);
    cfg.wall_model.eps_r = get_double(obj, path, "wall_eps_r", cfg.wall_model.eps_r);
    cfg.wall_model.sigma_s_per_m = get_double(obj, path, "wall_sigma_s_m", cfg.wall_model.sigma_s_per_m);
    if (cfg.table_path.empty()) {
        if (cfg.table_bits < 1 || cfg.table_bits > 8) fail(path + ".bits", "must be in 1..8");
        if (!(cfg.table_amplitude > 0.0) || cfg.table_amplitude > 1.0)
            fail(path + ".amplitude", "must be in (0, 1]");
    }
}

void parse_ga(const json& obj, RunConfig& cfg) {
    const std::string path = "ga";
    check_keys(obj, path,
               {"population", "max_iterations", "rho_min", "rho_max", "psi_min", "psi_max", "sigma_max", "window",
                "nu_max", "beta_max", "kappa_max", "delta", "memory_capacity", "polarity"});
    GaParams& g = cfg.ga;
    g.population = get_int(obj, path, "population", g.population);
    g.max_iterations = get_int(obj, path, "max_iterations", g.max_iterations);
    g.rho_min = get_double(obj, path, "rho_min", g.rho_min);
    g.rho_max = get_double(obj, path, "rho_max", g.rho_max);
    g.psi_min = get_double(obj, path, "psi_min", g.psi_min);
    g.psi_max = get_double(obj, path, "psi_max", g.psi_max);
    g.sigma_max = get_double(obj, path, "sigma_max", g.sigma_max);
    g.window = get_int(obj, path, "window", g.window);
    g.nu_max = get_double(obj, path, "nu_max", g.nu_max);
    g.beta_max = get_double(obj, path, "beta_max", g.beta_max);
    g.kappa_max = get_double(obj, path, "kappa_max", g.kappa_max);
    g.delta = get_double(obj, path, "delta", g.delta);
    g.memory_capacity = get_int(obj, path, "memory_capacity", g.memory_capacity);
    const std::string polarity = get_string(obj, path, "polarity", "paper");
    if (polarity == "paper")
        g.polarity = MemoryPolarity::paper;
    else if (polarity == "inverted")
        g.polarity = MemoryPolarity::inverted;
    else
        fail(path + ".polarity", "expected \"paper\" or \"inverted\"");
    try {
        validate_params(g);
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

void parse_scenario(const json& obj, RunConfig& cfg) {
    const std::string path = "scenario";
    check_keys(obj, path, {"kind", "users", "steps", "period", "path", "v_max", "dt"});
    const std::string kind = get_string(obj, path, "kind", "aperiodic");
    if (kind == "aperiodic")
        cfg.kind = TrajectoryKind::aperiodic;
    else if (kind == "periodic")
        cfg.kind = TrajectoryKind::periodic;
    else if (kind == "imported")
        cfg.kind = TrajectoryKind::imported;
    else
        fail(path + ".kind", "expected \"aperiodic\", \"periodic\" or \"imported\"");
    cfg.users = get_int(obj, path, "users", cfg.users);
    cfg.steps = get_int(obj, path, "steps", cfg.steps);
    cfg.period = get_int(obj, path, "period", cfg.period);
    cfg.trajectory_path = get_string(obj, path, "path", cfg.trajectory_path);
    cfg.mobility.v_max = get_double(obj, path, "v_max", cfg.mobility.v_max);
    cfg.mobility.dt = get_double(obj, path, "dt", cfg.mobility.dt);
    if (cfg.users < 1) fail(path + ".users", "must be at least 1");
    if (cfg.steps < 1) fail(path + ".steps", "must be at least 1");
    if (cfg.kind == TrajectoryKind::periodic && (cfg.period < 2 || cfg.period > cfg.steps))
        fail(path + ".period", "must be in [2, steps]");
    if (cfg.kind == TrajectoryKind::imported && cfg.trajectory_path.empty())
        fail(path + ".path", "required for an imported trajectory");
    if (cfg.mobility.v_max < 0.0) fail(path + ".v_max", "must be non-negative");
    if (!(cfg.mobility.dt > 0.0)) fail(path + ".dt", "must be positive");
}

void parse_outputs(const json& obj, RunConfig& cfg) {
    const std::string path = "outputs";
    check_keys(obj, path, {"footprint_grid", "footprint_steps", "footprint_beams"});
    if (obj.contains("footprint_grid")) {
        const json& v = obj.at("footprint_grid");
        if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
            fail(path + ".footprint_grid", "expected [nx, ny]");
        cfg.footprint_nx = v[0].get<int>();
        cfg.footprint_ny = v[1].get<int>();
        if (cfg.footprint_nx < 2 || cfg.footprint_ny < 2) fail(path + ".footprint_grid", "grid must be at least 2x2");
    }
    cfg.footprint_steps = get_int_list(obj, path, "footprint_steps", cfg.footprint_steps);
    cfg.footprint_beams = get_int_list(obj, path, "footprint_beams", cfg.footprint_beams);
}

} // namespace

RunConfig parse_config_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i)
            if (text[i] == '\n') ++line;
        throw ConfigError("config: syntax error at line " + std::to_string(line) + ": " + e.what());
    }
    check_keys(root, "(root)", {"scene", "table", "ga", "scenario", "outputs"});

    RunConfig cfg;
    if (root.contains("scene")) parse_scene(root.at("scene"), cfg);
    if (root.contains("table")) parse_table(root.at("table"), cfg);
    if (root.contains("ga")) parse_ga(root.at("ga"), cfg);
    if (root.contains("scenario")) parse_scenario(root.at("scenario"), cfg);
    if (root.contains("outputs")) parse_outputs(root.at("outputs"), cfg);

    if (static_cast<long>(cfg.scene.bs_rows) * cfg.scene.bs_cols < cfg.users)
        fail("scenario.users", "zero-forcing needs at least as many antennas as users");
    cfg.mobility.user_height = cfg.scene.user_height_m;
    cfg.mobility.min_separation = cfg.scene.min_user_separation_m;
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::string describe_config_format() {
    return "JSON object with optional sections scene, table, ga, scenario, outputs;\n"
           "unknown keys are rejected. dBm fields are converted to watts on parse.\n"
           "See configs/ for annotated examples.";
}

} // namespace risc
