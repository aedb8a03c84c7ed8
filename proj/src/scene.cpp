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

#include "risc/scene.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace risc {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument("scene: " + msg);
}

} // namespace

SceneGeometry build_scene(const SceneConfig& config) {
    using namespace constants;

    require(config.f0_hz > 0.0, "carrier frequency must be positive");
    require(config.bs_rows >= 1 && config.bs_cols >= 1, "base station grid must have at least one element");
    require(config.ris_rows >= 1 && config.ris_cols >= 1, "surface grid must have at least one patch");
    require(config.ris_side_m > 0.0, "surface side must be positive");
    require(config.wall_width_m > 0.0 && config.wall_height_m > 0.0, "wall dimensions must be positive");
    require(config.user_area.x_max > config.user_area.x_min && config.user_area.y_max > config.user_area.y_min,
            "user area must have positive extent");

    require(config.averaging_factor > 0.0, "averaging factor must be positive");
    require(config.quadrature_points == 1 || config.quadrature_points == 2,
            "quadrature must be 1 (centroid) or 2 (2x2 subsampling)");

    SceneGeometry g;
    g.f0 = config.f0_hz;
    g.k0 = 2.0 * pi * config.f0_hz * std::sqrt(eps0 * mu0);
    g.eta0 = eta0;
    g.wavelength = c0 / config.f0_hz;
    g.averaging_factor = config.averaging_factor;
    g.quadrature_points = config.quadrature_points;

    // Surface frame: vertical wall through wall_center, facing +y.
    g.surface_origin = config.wall_center;
    g.normal = Vec3(0.0, 1.0, 0.0);
    g.plane_axis1 = Vec3::UnitX();
    g.plane_axis2 = Vec3::UnitZ();

    Vec3 chi = config.polarization;
    chi -= chi.dot(g.normal) * g.normal; // keep the tangential part
    require(chi.norm() > 1e-9, "polarization must not be parallel to the wall normal");
    g.polarization = chi.normalized();
    g.tangent2 = g.polarization;
    g.tangent1 = g.tangent2.cross(g.normal); // tangent1 x tangent2 == normal

    // Meta-atom grid: square patches of pitch ris_side/cols.
    const double pitch = config.ris_side_m / config.ris_cols;
    g.ris_width = config.ris_side_m;
    g.ris_height = pitch * config.ris_rows;
    require(g.ris_width <= config.wall_width_m + 1e-12 && g.ris_height <= config.wall_height_m + 1e-12,
            "reconfigurable surface does not fit inside the wall");

    const Eigen::Index p_count = static_cast<Eigen::Index>(config.ris_rows) * config.ris_cols;
    g.ris.centers.resize(3, p_count);
    g.ris.side = RVector::Constant(p_count, pitch);
    g.ris.area = RVector::Constant(p_count, pitch * pitch);
    {
        Eigen::Index p = 0;
        for (int i = 0; i < config.ris_rows; ++i) {
            for (int j = 0; j < config.ris_cols; ++j, ++p) {
                const double x = (j - (config.ris_cols - 1) / 2.0) * pitch;
                const double z = (i - (config.ris_rows - 1) / 2.0) * pitch;
                g.ris.centers.col(p) = config.wall_center + Vec3(x, 0.0, z);
            }
        }
    }

    // Wall partition: same pitch, grid aligned with the meta-atom lattice, so
    // that wall cells never straddle the reconfigurable region. Edge cells are
    // clipped to the wall rectangle and keep their reduced area.
    {
        const double ris_x_lo = config.wall_center.x() - g.ris_width / 2.0;
        const double ris_z_lo = config.wall_center.z() - g.ris_height / 2.0;
        const double wall_x_lo = config.wall_center.x() - config.wall_width_m / 2.0;
        const double wall_x_hi = config.wall_center.x() + config.wall_width_m / 2.0;
        const double wall_z_lo = config.wall_center.z() - config.wall_height_m / 2.0;
        const double wall_z_hi = config.wall_center.z() + config.wall_height_m / 2.0;

        const int j_lo = static_cast<int>(std::floor((wall_x_lo - ris_x_lo) / pitch));
        const int j_hi = static_cast<int>(std::ceil((wall_x_hi - ris_x_lo) / pitch));
        const int i_lo = static_cast<int>(std::floor((wall_z_lo - ris_z_lo) / pitch));
        const int i_hi = static_cast<int>(std::ceil((wall_z_hi - ris_z_lo) / pitch));

        std::vector<Vec3> centers;
        std::vector<double> areas;
        for (int i = i_lo; i < i_hi; ++i) {
            for (int j = j_lo; j < j_hi; ++j) {
                if (i >= 0 && i < config.ris_rows && j >= 0 && j < config.ris_cols) continue; // meta-atom cell
                const double x0 = std::max(ris_x_lo + j * pitch, wall_x_lo);
                const double x1 = std::min(ris_x_lo + (j + 1) * pitch, wall_x_hi);
                const double z0 = std::max(ris_z_lo + i * pitch, wall_z_lo);
                const double z1 = std::min(ris_z_lo + (i + 1) * pitch, wall_z_hi);
                if (x1 - x0 <= 1e-12 || z1 - z0 <= 1e-12) continue;
                centers.emplace_back((x0 + x1) / 2.0, config.wall_center.y(), (z0 + z1) / 2.0);
                areas.push_back((x1 - x0) * (z1 - z0));
            }
        }
        const Eigen::Index q_count = static_cast<Eigen::Index>(centers.size());
        g.wall.centers.resize(3, q_count);
        g.wall.side = RVector::Constant(q_count, pitch);
        g.wall.area.resize(q_count);
        for (Eigen::Index q = 0; q < q_count; ++q) {
            g.wall.centers.col(q) = centers[static_cast<std::size_t>(q)];
            g.wall.area[q] = areas[static_cast<std::size_t>(q)];
        }
    }

    // Base station: uniform planar array, boresight at the surface center.
    {
        const double spacing = config.bs_spacing_m > 0.0 ? config.bs_spacing_m : g.wavelength / 2.0;
        Vec3 boresight = config.wall_center - config.bs_position;
        require(boresight.norm() > 1e-9, "base station must not coincide with the surface center");
        require(boresight.dot(g.normal) < 0.0, "base station must be on the illuminated side of the wall");
        boresight.normalize();
        Vec3 u = boresight.cross(Vec3::UnitZ());
        if (u.norm() < 1e-9) u = boresight.cross(Vec3::UnitX());
        u.normalize();
        const Vec3 v = boresight.cross(u).normalized();

        const Eigen::Index m_count = static_cast<Eigen::Index>(config.bs_rows) * config.bs_cols;
        g.bs_elements.resize(3, m_count);
        Eigen::Index m = 0;
        for (int i = 0; i < config.bs_rows; ++i) {
            for (int j = 0; j < config.bs_cols; ++j, ++m) {
                const double du = (j - (config.bs_cols - 1) / 2.0) * spacing;
                const double dv = (i - (config.bs_rows - 1) / 2.0) * spacing;
                g.bs_elements.col(m) = config.bs_position + du * u + dv * v;
            }
        }
    }

    g.user_area = config.user_area;
    g.user_height = config.user_height_m;
    g.min_user_separation = config.min_user_separation_m;

    // Tiling sanity: the meta-atom cells partition their rectangle exactly.
    const double tile_err = std::abs(g.ris.area.sum() - g.ris_width * g.ris_height) / (g.ris_width * g.ris_height);
    require(tile_err < 1e-9, "surface patch tiling is inconsistent");

    return g;
}

SceneGeometry relabel_ris_as_wall(const SceneGeometry& scene) {
    SceneGeometry g = scene;
    const Eigen::Index q = scene.wall.count();
    const Eigen::Index p = scene.ris.count();
    g.wall.centers.resize(3, q + p);
    g.wall.centers.leftCols(q) = scene.wall.centers;
    g.wall.centers.rightCols(p) = scene.ris.centers;
    g.wall.side.resize(q + p);
    g.wall.side << scene.wall.side, scene.ris.side;
    g.wall.area.resize(q + p);
    g.wall.area << scene.wall.area, scene.ris.area;
    g.ris.centers.resize(3, 0);
    g.ris.side.resize(0);
    g.ris.area.resize(0);
    g.ris_width = 0.0;
    g.ris_height = 0.0;
    return g;
}

SceneGeometry remove_wall(const SceneGeometry& scene) {
    SceneGeometry g = scene;
    g.wall.centers.resize(3, 0);
    g.wall.side.resize(0);
    g.wall.area.resize(0);
    return g;
}

std::string check_snapshot(const SceneGeometry& scene, const UserSnapshot& snapshot) {
    std::ostringstream err;
    const Eigen::Index users = snapshot.num_users();
    if (users < 1) return "snapshot has no users";
    for (Eigen::Index l = 0; l < users; ++l) {
        const Vec3 r = snapshot.positions.col(l);
        if (!scene.user_area.contains(r.x(), r.y())) {
            err << "user " << l + 1 << " outside the user area at step " << snapshot.step;
            return err.str();
        }
        if (std::abs(r.z() - scene.user_height) > 1e-6) {
            err << "user " << l + 1 << " not at user height at step " << snapshot.step;
            return err.str();
        }
        for (Eigen::Index k = 0; k < l; ++k) {
            if ((snapshot.positions.col(k) - r).norm() < scene.min_user_separation) {
                err << "users " << k + 1 << " and " << l + 1 << " closer than the minimum separation at step "
                    << snapshot.step;
                return err.str();
            }
        }
    }
    return {};
}

} // namespace risc
