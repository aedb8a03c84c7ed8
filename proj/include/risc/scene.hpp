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

#ifndef RISC_SCENE_HPP
#define RISC_SCENE_HPP

#include "risc/types.hpp"

#include <string>

namespace risc {

// Axis-aligned rectangle in the ground plane, used for the user area and
// footprint grids.
struct GroundRect {
    double x_min = 0.0, x_max = 0.0;
    double y_min = 0.0, y_max = 0.0;
    bool contains(double x, double y, double tol = 1e-9) const {
        return x >= x_min - tol && x <= x_max + tol && y >= y_min - tol && y <= y_max + tol;
    }
};

// One planar patch set (structure-of-arrays). All patches share the surface
// plane and outward normal stored in SceneGeometry. `side` is the nominal
// grid pitch; `area` is the true (possibly edge-clipped) quadrature weight.
struct PatchSet {
    Eigen::Matrix3Xd centers; // 3 x N, global coordinates (m)
    RVector side;             // N, nominal pitch (m)
    RVector area;             // N, quadrature weight (m^2)
    Eigen::Index count() const { return centers.cols(); }
};

struct SceneConfig {
    double f0_hz = 3.5e9;
    // Base station: uniform planar array, boresight toward the surface center.
    int bs_rows = 30;
    int bs_cols = 30;
    double bs_spacing_m = 0.0; // 0 -> half wavelength
    Vec3 bs_position{-20.0, 20.0, 5.0};
    // Reconfigurable surface: rows x cols square meta-atom grid of total width
    // ris_side_m, mounted in a larger wall. The wall is vertical, centered at
    // wall_center, and faces the +y half-space.
    int ris_rows = 45;
    int ris_cols = 45;
    double ris_side_m = 1.93;
    double wall_width_m = 6.0;
    double wall_height_m = 7.0;
    Vec3 wall_center{0.0, 0.0, 5.0};
    Vec3 polarization{0.0, 0.0, 1.0}; // projected onto the wall plane
    GroundRect user_area{-60.0, 60.0, 30.0, 110.0};
    double user_height_m = 1.5;
    double min_user_separation_m = 0.1;
    // forward-model options
    double averaging_factor = 1.0; // 1.0 = bare incident field; two-sided averaging scales it
    int quadrature_points = 1;     // 1 = centroid rule, 2 = 2x2 subsampling per patch
};

// Immutable static geometry. Safe to share across threads after construction.
struct SceneGeometry {
    double f0 = 0.0;   // Hz
    double k0 = 0.0;   // rad/m
    double eta0 = 0.0; // Ohm
    double wavelength = 0.0;

    Eigen::Matrix3Xd bs_elements; // 3 x M
    Vec3 polarization;            // chi, unit, tangential to the wall

    // Surface frame: tangent1 = polarization x normal-compatible in-plane
    // axis, tangent2 = polarization, normal = outward unit normal. The frame
    // is shared by every patch (single flat wall). plane_axis1/2 are the
    // patch-grid edge directions.
    Vec3 surface_origin; // phase/range reference for far-field evaluation
    Vec3 tangent1;
    Vec3 tangent2;
    Vec3 normal;
    Vec3 plane_axis1;
    Vec3 plane_axis2;

    double averaging_factor = 1.0;
    int quadrature_points = 1;

    PatchSet ris;  // P
    PatchSet wall; // Q
    double ris_width = 0.0;  // m
    double ris_height = 0.0; // m

    GroundRect user_area;
    double user_height = 0.0;
    double min_user_separation = 0.0;

    Eigen::Index num_elements() const { return bs_elements.cols(); }
    Eigen::Index num_ris_patches() const { return ris.count(); }
    Eigen::Index num_wall_patches() const { return wall.count(); }
    Eigen::Index num_patches() const { return ris.count() + wall.count(); }
};

// Positions of the L users at one time step.
struct UserSnapshot {
    int step = 1;                 // 1-based c
    Eigen::Matrix3Xd positions;   // 3 x L
    Eigen::Index num_users() const { return positions.cols(); }
};

// Builds and validates the static geometry. Throws std::invalid_argument on
// inconsistent configuration (surface larger than wall, non-positive sizes,
// empty array, polarization parallel to the wall normal).
SceneGeometry build_scene(const SceneConfig& config);

// Returns a copy of `scene` with the reconfigurable patches appended to the
// wall set (P = 0). Used by baselines that treat the whole surface as plain
// wall.
SceneGeometry relabel_ris_as_wall(const SceneGeometry& scene);

// Returns a copy of `scene` with the wall patches dropped (Q = 0), so only
// the reconfigurable aperture radiates.
SceneGeometry remove_wall(const SceneGeometry& scene);

// Checks the snapshot against the scene: users inside the user area at the
// configured height, pairwise separation at least scene.min_user_separation.
// Returns an empty string when valid, otherwise a description of the first
// violation.
std::string check_snapshot(const SceneGeometry& scene, const UserSnapshot& snapshot);

} // namespace risc

#endif // RISC_SCENE_HPP
