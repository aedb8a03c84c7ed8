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

#include "risc/em_forward.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace risc {

namespace {

using constants::pi;

const Complex j1{0.0, 1.0};

inline Complex free_space_kernel(double k0, double d) {
    return std::exp(-j1 * (k0 * d)) / (4.0 * pi * d);
}

void check_state_range(const RisConfiguration& s, int num_states) {
    for (Eigen::Index p = 0; p < s.size(); ++p) {
        if (s[p] < 1 || s[p] > num_states) {
            std::ostringstream msg;
            msg << "meta-atom state " << s[p] << " at position " << p + 1 << " outside {1.." << num_states << "}";
            throw std::out_of_range(msg.str());
        }
    }
}

// Center of patch i in the stacked (meta-atom, wall) ordering.
inline Vec3 patch_center(const SceneGeometry& scene, Eigen::Index i) {
    const Eigen::Index p = scene.ris.count();
    return i < p ? Vec3(scene.ris.centers.col(i)) : Vec3(scene.wall.centers.col(i - p));
}

inline double patch_area(const SceneGeometry& scene, Eigen::Index i) {
    const Eigen::Index p = scene.ris.count();
    return i < p ? scene.ris.area[i] : scene.wall.area[i - p];
}

} // namespace

bool valid_configuration(const RisConfiguration& s, Eigen::Index num_patches, int num_states) {
    if (s.size() != num_patches) return false;
    return (s.array() >= 1).all() && (s.array() <= num_states).all();
}

IncidenceMatrix incidence_matrix(const SceneGeometry& scene) {
    const Eigen::Index n = scene.num_patches();
    const Eigen::Index m_count = scene.num_elements();
    IncidenceMatrix inc;
    inc.H1.resize(n, m_count);
    inc.H1h.resize(n, m_count);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vec3 c = patch_center(scene, i);
        for (Eigen::Index m = 0; m < m_count; ++m) {
            const Vec3 delta = c - scene.bs_elements.col(m);
            const double d = delta.norm();
            const Complex g = free_space_kernel(scene.k0, d);
            const Vec3 rhat = delta / d;
            inc.H1(i, m) = g;
            inc.H1h(i, m) = g * rhat.cross(scene.polarization).dot(scene.tangent1) / scene.eta0;
        }
    }
    return inc;
}

RadiationMatrix radiation_matrix(const SceneGeometry& scene, const Eigen::Matrix3Xd& points) {
    const Eigen::Index n = scene.num_patches();
    const Eigen::Index l_count = points.cols();
    RadiationMatrix rad;
    rad.H2.resize(l_count, n);
    rad.obs_e.resize(l_count);
    rad.obs_h.resize(l_count);
    for (Eigen::Index l = 0; l < l_count; ++l) {
        const Vec3 rel = points.col(l) - scene.surface_origin;
        const double range = rel.norm();
        if (range <= 0.0) throw std::invalid_argument("observation point coincides with the surface origin");
        const Vec3 rhat = rel / range;
        const Complex pref = j1 * scene.k0 / (4.0 * pi) * std::exp(-j1 * (scene.k0 * range)) / range;
        rad.obs_e[l] = -j1 * scene.k0 * rhat.cross(scene.polarization).squaredNorm();
        rad.obs_h[l] = j1 * scene.k0 * scene.eta0 * rhat.dot(scene.normal);
        for (Eigen::Index i = 0; i < n; ++i) {
            const Vec3 offset = patch_center(scene, i) - scene.surface_origin;
            const double area = patch_area(scene, i);
            if (scene.quadrature_points == 1) {
                rad.H2(l, i) = pref * area * std::exp(j1 * (scene.k0 * rhat.dot(offset)));
            } else {
                // 2x2 subsampling on a square-equivalent footprint
                const double half = std::sqrt(area) / 4.0;
                Complex sum(0.0, 0.0);
                for (int su = -1; su <= 1; su += 2)
                    for (int sv = -1; sv <= 1; sv += 2) {
                        const Vec3 sub = offset + half * (su * scene.plane_axis1 + sv * scene.plane_axis2);
                        sum += std::exp(j1 * (scene.k0 * rhat.dot(sub)));
                    }
                rad.H2(l, i) = pref * (area / 4.0) * sum;
            }
        }
    }
    return rad;
}

std::pair<CVector, CVector> response_coefficients(const SusceptibilityTable& table, const RisConfiguration& s,
                                                  Eigen::Index ris_count, Eigen::Index wall_count, SurfaceMode mode) {
    if (s.size() != ris_count) throw std::invalid_argument("configuration length does not match the meta-atom count");
    if (mode == SurfaceMode::normal) check_state_range(s, table.num_states());
    CVector d_e(ris_count + wall_count);
    CVector d_h(ris_count + wall_count);
    for (Eigen::Index i = 0; i < ris_count; ++i) {
        const SusceptibilityEntry& entry =
            mode == SurfaceMode::ris_as_wall ? table.wall : table.states[static_cast<std::size_t>(s[i] - 1)];
        d_e[i] = entry.Ke[1];
        d_h[i] = entry.Kh[0];
    }
    for (Eigen::Index i = 0; i < wall_count; ++i) {
        d_e[ris_count + i] = table.wall.Ke[1];
        d_h[ris_count + i] = table.wall.Kh[0];
    }
    return {std::move(d_e), std::move(d_h)};
}

PatchCurrents patch_currents(const SceneGeometry& scene, const SusceptibilityTable& table, const RisConfiguration& s,
                             const CVector& incident_e, const CVector& incident_h, SurfaceMode mode) {
    const Eigen::Index n = scene.num_patches();
    if (incident_e.size() != n || incident_h.size() != n)
        throw std::invalid_argument("incident field length does not match the patch count");
    auto [d_e, d_h] = response_coefficients(table, s, scene.ris.count(), scene.wall.count(), mode);

    const double omega = scene.k0 * constants::c0;
    // the averaged local fields are averaging_factor * incident
    const Complex ce = j1 * omega * constants::eps0 * scene.averaging_factor;
    const Complex ch = j1 * omega * constants::mu0 * scene.averaging_factor;
    PatchCurrents cur;
    cur.Je.resize(3, n);
    cur.Jh.resize(3, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        cur.Je.col(i) = (ce * d_e[i] * incident_e[i]) * scene.tangent2.cast<Complex>();
        cur.Jh.col(i) = (ch * d_h[i] * incident_h[i]) * scene.tangent1.cast<Complex>();
    }
    return cur;
}

CMatrix cascaded_matrix(const SceneGeometry& scene, const SusceptibilityTable& table, const RisConfiguration& s,
                        const IncidenceMatrix& inc, const RadiationMatrix& rad, SurfaceMode mode) {
    const Eigen::Index n = scene.num_patches();
    if (inc.H1.rows() != n || inc.H1h.rows() != n || rad.H2.cols() != n)
        throw std::invalid_argument("matrix shapes do not match the scene");
    auto [d_e, d_h] = response_coefficients(table, s, scene.ris.count(), scene.wall.count(), mode);
    d_e *= scene.averaging_factor;
    d_h *= scene.averaging_factor;
    return rad.obs_e.asDiagonal() * (rad.H2 * (d_e.asDiagonal() * inc.H1)) +
           rad.obs_h.asDiagonal() * (rad.H2 * (d_h.asDiagonal() * inc.H1h));
}

CMatrix far_fields(const CMatrix& cascaded, const CMatrix& weights) {
    if (cascaded.cols() != weights.rows())
        throw std::invalid_argument("weight rows do not match the channel columns");
    return cascaded * weights;
}

Footprint footprint(const SceneGeometry& scene, const SusceptibilityTable& table, const RisConfiguration& s,
                    const IncidenceMatrix& inc, const CMatrix& weights, const GroundRect& area, int nx, int ny,
                    Eigen::Index beam, SurfaceMode mode) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("footprint grid must be at least 2x2");
    if (beam < 0 || beam >= weights.cols()) throw std::invalid_argument("beam index outside the weight matrix");

    Footprint fp;
    fp.xs = RVector::LinSpaced(nx, area.x_min, area.x_max);
    fp.ys = RVector::LinSpaced(ny, area.y_min, area.y_max);
    Eigen::Matrix3Xd points(3, static_cast<Eigen::Index>(nx) * ny);
    Eigen::Index idx = 0;
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix, ++idx) points.col(idx) = Vec3(fp.xs[ix], fp.ys[iy], scene.user_height);

    const RadiationMatrix rad = radiation_matrix(scene, points);
    const CMatrix ups = cascaded_matrix(scene, table, s, inc, rad, mode);
    const CVector field = ups * weights.col(beam);
    fp.power.resize(ny, nx);
    idx = 0;
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix, ++idx) fp.power(iy, ix) = std::norm(field[idx]);
    return fp;
}

Complex slab_reflection(double f0_hz, const WallModel& wall) {
    const double omega = 2.0 * pi * f0_hz;
    const double k0 = omega / constants::c0;
    const Complex eps(wall.eps_r, -wall.sigma_s_per_m / (omega * constants::eps0));
    const Complex n = std::sqrt(eps); // principal branch: Re > 0, Im < 0 for lossy media
    const Complex r01 = (1.0 - n) / (1.0 + n);
    const Complex phase = std::exp(-2.0 * j1 * n * (k0 * wall.thickness_m));
    return r01 * (1.0 - phase) / (1.0 - r01 * r01 * phase);
}

Complex implied_reflection(const SusceptibilityEntry& entry, double f0_hz) {
    const double k0 = 2.0 * pi * f0_hz / constants::c0;
    return j1 * k0 / 2.0 * (entry.Kh[0] - entry.Ke[1]);
}

namespace {

// Splits a target reflection coefficient into a balanced electric/magnetic
// susceptibility pair, isotropic over the two tangential axes.
SusceptibilityEntry entry_from_reflection(Complex r, double k0) {
    const Complex k = r / (j1 * k0);
    SusceptibilityEntry e;
    e.Ke << -k, -k, Complex(0.0, 0.0);
    e.Kh << k, k, Complex(0.0, 0.0);
    return e;
}

} // namespace

SusceptibilityTable calibrate_state_table(int bits, double amplitude, double f0_hz, const WallModel& wall) {
    if (bits < 1 || bits > 8) throw std::invalid_argument("table: bits must be in 1..8");
    if (!(amplitude > 0.0) || amplitude > 1.0)
        throw std::invalid_argument("table: reflection amplitude must be in (0, 1]");
    if (!(f0_hz > 0.0)) throw std::invalid_argument("table: frequency must be positive");

    const double k0 = 2.0 * pi * f0_hz / constants::c0;
    const int n = 1 << bits;
    SusceptibilityTable table;
    table.bits = bits;
    table.f0_hz = f0_hz;
    table.states.reserve(static_cast<std::size_t>(n));
    for (int s = 1; s <= n; ++s) {
        const double phase = 2.0 * pi * (s - 1) / n;
        table.states.push_back(entry_from_reflection(amplitude * std::exp(j1 * phase), k0));
    }
    table.wall = entry_from_reflection(slab_reflection(f0_hz, wall), k0);
    {
        std::ostringstream prov;
        prov << bits << "-bit uniform phase grid, amplitude " << amplitude << ", f0 " << f0_hz * 1e-9 << " GHz";
        table.provenance = prov.str();
    }

    const CalibrationCheck check = verify_state_table(table, amplitude);
    if (!check.passive || check.max_phase_error_deg > 5.0 || check.max_amplitude_deviation > 0.02) {
        std::ostringstream msg;
        msg << "table calibration failed the uniform-sheet check (phase error " << check.max_phase_error_deg
            << " deg, amplitude deviation " << check.max_amplitude_deviation << ")";
        throw std::runtime_error(msg.str());
    }
    return table;
}

CalibrationCheck verify_state_table(const SusceptibilityTable& table, double amplitude) {
    if (table.f0_hz <= 0.0) throw std::invalid_argument("table has no calibration frequency");
    const double lambda = constants::c0 / table.f0_hz;

    // Uniform square sheet, 20 wavelengths per side at half-wavelength pitch,
    // observed on axis well beyond the Fraunhofer distance.
    SceneConfig cfg;
    cfg.f0_hz = table.f0_hz;
    cfg.bs_rows = cfg.bs_cols = 1;
    cfg.bs_position = Vec3(0.0, 100.0 * lambda, 0.0);
    cfg.ris_rows = cfg.ris_cols = 40;
    cfg.ris_side_m = 20.0 * lambda;
    cfg.wall_width_m = cfg.wall_height_m = 20.0 * lambda;
    cfg.wall_center = Vec3::Zero();
    cfg.user_area = GroundRect{-1.0, 1.0, 1.0, 2.0};
    const SceneGeometry sheet = build_scene(cfg);

    const double fraunhofer = 2.0 * cfg.ris_side_m * cfg.ris_side_m / lambda;
    Eigen::Matrix3Xd specular(3, 1);
    specular.col(0) = sheet.surface_origin + 10.0 * fraunhofer * sheet.normal;
    const RadiationMatrix rad = radiation_matrix(sheet, specular);

    // Normal-incidence unit illumination: e = 1, h = 1/eta0 on every patch.
    const CVector kernel_sum = rad.H2.row(0).transpose();
    const Complex base_e = rad.obs_e[0] * kernel_sum.sum();
    const Complex base_h = rad.obs_h[0] / sheet.eta0 * kernel_sum.sum();

    const int n = table.num_states();
    std::vector<Complex> field(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s)
        field[static_cast<std::size_t>(s)] = base_e * table.states[static_cast<std::size_t>(s)].Ke[1] +
                                             base_h * table.states[static_cast<std::size_t>(s)].Kh[0];

    CalibrationCheck check;
    check.passive = true;
    double amp_min = std::abs(field[0]);
    double amp_max = amp_min;
    for (int s = 0; s < n; ++s) {
        const double target_delta = 2.0 * pi * s / n;
        const Complex ratio = field[static_cast<std::size_t>(s)] / field[0];
        double err = std::arg(ratio * std::exp(-j1 * target_delta));
        check.max_phase_error_deg = std::max(check.max_phase_error_deg, std::abs(err) * 180.0 / pi);
        amp_min = std::min(amp_min, std::abs(field[static_cast<std::size_t>(s)]));
        amp_max = std::max(amp_max, std::abs(field[static_cast<std::size_t>(s)]));
        if (std::abs(implied_reflection(table.states[static_cast<std::size_t>(s)], table.f0_hz)) >
            amplitude + 1e-9)
            check.passive = false;
    }
    check.max_amplitude_deviation = amp_min > 0.0 ? amp_max / amp_min - 1.0 : 1.0;
    if (std::abs(implied_reflection(table.wall, table.f0_hz)) > 1.0 + 1e-9) check.passive = false;
    return check;
}

void save_table(const SusceptibilityTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write table file: " + path);
    out << "# surface susceptibility table: index Re/Im of Ke_x Ke_y Ke_z Kh_x Kh_y Kh_z (m)\n";
    out << "# index 0 is the fixed wall entry; states are 1.." << table.num_states() << "\n";
    if (table.f0_hz > 0.0) out << "# f0_hz " << table.f0_hz << "\n";
    if (!table.provenance.empty()) out << "# " << table.provenance << "\n";
    char buf[64];
    auto row = [&](int index, const SusceptibilityEntry& e) {
        out << index;
        for (int c = 0; c < 6; ++c) {
            const Complex v = c < 3 ? e.Ke[c] : e.Kh[c - 3];
            std::snprintf(buf, sizeof buf, " %.17g %.17g", v.real(), v.imag());
            out << buf;
        }
        out << "\n";
    };
    row(0, table.wall);
    for (int s = 1; s <= table.num_states(); ++s) row(s, table.states[static_cast<std::size_t>(s - 1)]);
}

SusceptibilityTable load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read table file: " + path);
    SusceptibilityTable table;
    std::vector<std::pair<int, SusceptibilityEntry>> rows;
    std::string line;
    int line_no = 0;
    double f0 = 0.0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream c(line.substr(1));
            std::string key;
            if (c >> key && key == "f0_hz") c >> f0;
            continue;
        }
        std::istringstream row(line);
        int index = 0;
        double v[12];
        if (!(row >> index >> v[0] >> v[1] >> v[2] >> v[3] >> v[4] >> v[5] >> v[6] >> v[7] >> v[8] >> v[9] >>
              v[10] >> v[11])) {
            throw std::runtime_error("table file " + path + ": malformed row at line " + std::to_string(line_no));
        }
        SusceptibilityEntry e;
        e.Ke << Complex(v[0], v[1]), Complex(v[2], v[3]), Complex(v[4], v[5]);
        e.Kh << Complex(v[6], v[7]), Complex(v[8], v[9]), Complex(v[10], v[11]);
        rows.emplace_back(index, e);
    }
    if (rows.empty()) throw std::runtime_error("table file " + path + ": no rows");

    int max_state = 0;
    for (const auto& [index, entry] : rows) max_state = std::max(max_state, index);
    if (max_state < 2 || (max_state & (max_state - 1)) != 0)
        throw std::runtime_error("table file " + path + ": state count must be a power of two (>= 2)");
    table.states.resize(static_cast<std::size_t>(max_state));
    std::vector<bool> seen(static_cast<std::size_t>(max_state) + 1, false);
    for (const auto& [index, entry] : rows) {
        if (index < 0 || index > max_state || seen[static_cast<std::size_t>(index)])
            throw std::runtime_error("table file " + path + ": bad or duplicate state index " + std::to_string(index));
        seen[static_cast<std::size_t>(index)] = true;
        if (index == 0)
            table.wall = entry;
        else
            table.states[static_cast<std::size_t>(index - 1)] = entry;
    }
    for (int s = 1; s <= max_state; ++s)
        if (!seen[static_cast<std::size_t>(s)])
            throw std::runtime_error("table file " + path + ": missing state " + std::to_string(s));
    table.bits = static_cast<int>(std::round(std::log2(max_state)));
    table.f0_hz = f0;
    table.provenance = "imported from " + path;
    return table;
}

} // namespace risc
