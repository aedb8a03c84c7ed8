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
//
// Sheet-transition scattering model of the wall-mounted reconfigurable
// surface, reduced to one scalar field channel per patch:
//
//  * The base station radiates the co-polarized scalar kernel
//        g(r_m, r) = exp(-j k0 d) / (4 pi d),        d = |r - r_m|,
//    so the incident electric field at a patch is e = sum_m g * alpha_m along
//    the (tangential) polarization axis chi. The companion magnetic entry is
//    the tangent1 component of (rhat x chi) e / eta0 per the plane-wave
//    impedance relation, rhat pointing from the element to the patch.
//
//  * Each patch carries diagonal electric/magnetic sheet susceptibilities
//    expressed in the surface frame (x = tangent1, y = tangent2 = chi,
//    z = normal). With piecewise-constant susceptibility the tangential
//    gradient terms vanish and the induced currents are
//        J_e = j w eps0 K_e,y e chi,     J_h = j w mu0 K_h,x h tangent1.
//
//  * The scattered far field at an observation point r (range R and unit
//    direction rhat taken from the surface origin) is the patch sum
//        F(r) = sum_i H2_i * ( obs_e K_e,y(i) e_i  +  obs_h K_h,x(i) h_i ),
//        H2_i  = (j k0 / 4 pi) (exp(-j k0 R)/R) a_i exp(j k0 rhat . c_i~),
//        obs_e = -j k0 |rhat x chi|^2,   obs_h = j k0 eta0 (rhat . normal),
//    which is the co-polar component of rhat x (eta0 rhat x J_e + J_h)
//    radiated with a one-point quadrature of weight a_i per patch.
//
// Stacking users over rows and elements over columns gives the cascaded
// channel Ups[l,m], linear in every per-patch response coefficient.

#ifndef RISC_EM_FORWARD_HPP
#define RISC_EM_FORWARD_HPP

#include "risc/scene.hpp"
#include "risc/types.hpp"

#include <string>
#include <utility>

namespace risc {

// Diagonal electric/magnetic susceptibility pair for one state, components in
// the surface frame (tangent1, tangent2 = polarization, normal). Units: m.
struct SusceptibilityEntry {
    Eigen::Vector3cd Ke = Eigen::Vector3cd::Zero();
    Eigen::Vector3cd Kh = Eigen::Vector3cd::Zero();
};

struct SusceptibilityTable {
    int bits = 0;                              // num_states == 2^bits
    std::vector<SusceptibilityEntry> states;   // index s-1 for state s in {1..2^bits}
    SusceptibilityEntry wall;                  // fixed, non-reconfigurable cells
    double f0_hz = 0.0;                        // calibration frequency, 0 if unknown
    std::string provenance;

    int num_states() const { return static_cast<int>(states.size()); }
};

enum class SurfaceMode {
    normal,      // meta-atoms follow the configuration, wall cells fixed
    ris_as_wall, // every patch responds with the wall susceptibility
};

// chi-polarized incident field entries per (patch, element). Rows: meta-atom
// patches first, wall patches after. Depends only on the geometry.
struct IncidenceMatrix {
    CMatrix H1;  // (P+Q) x M, electric entries
    CMatrix H1h; // (P+Q) x M, tangential magnetic entries
};

// Far-field kernels per (observation point, patch), plus the per-observation
// polarization factors obs_e/obs_h defined above. Rebuilt per user snapshot.
struct RadiationMatrix {
    CMatrix H2;    // L x (P+Q), common kernel including the patch area weight
    CVector obs_e; // L
    CVector obs_h; // L
};

struct PatchCurrents {
    Eigen::Matrix3Xcd Je; // 3 x (P+Q), global components (A/m)
    Eigen::Matrix3Xcd Jh; // 3 x (P+Q), global components (V/m)
};

struct Footprint {
    RVector xs;    // grid x coordinates (m)
    RVector ys;    // grid y coordinates (m)
    RMatrix power; // ys.size() x xs.size(), |F_b|^2
};

bool valid_configuration(const RisConfiguration& s, Eigen::Index num_patches, int num_states);

IncidenceMatrix incidence_matrix(const SceneGeometry& scene);

RadiationMatrix radiation_matrix(const SceneGeometry& scene, const Eigen::Matrix3Xd& points);

// Induced current coefficients under the given incident per-patch fields
// (chi-polarized scalar e, tangential magnetic scalar h). Throws on a state
// index outside the table.
PatchCurrents patch_currents(const SceneGeometry& scene, const SusceptibilityTable& table,
                             const RisConfiguration& s, const CVector& incident_e, const CVector& incident_h,
                             SurfaceMode mode = SurfaceMode::normal);

// Per-patch response coefficients (d_e, d_h) entering the cascaded chain:
// state entries for meta-atom rows, wall constants for wall rows.
std::pair<CVector, CVector> response_coefficients(const SusceptibilityTable& table, const RisConfiguration& s,
                                                  Eigen::Index ris_count, Eigen::Index wall_count, SurfaceMode mode);

// Cascaded channel Ups = obs_e H2 D_e(s) H1 + obs_h H2 D_h(s) H1h.
CMatrix cascaded_matrix(const SceneGeometry& scene, const SusceptibilityTable& table, const RisConfiguration& s,
                        const IncidenceMatrix& inc, const RadiationMatrix& rad, SurfaceMode mode = SurfaceMode::normal);

// F = Ups * A; entry (l, b) is beam b's field at user l.
CMatrix far_fields(const CMatrix& cascaded, const CMatrix& weights);

// |F_b|^2 sampled on an nx x ny grid over `area` at the scene user height.
Footprint footprint(const SceneGeometry& scene, const SusceptibilityTable& table, const RisConfiguration& s,
                    const IncidenceMatrix& inc, const CMatrix& weights, const GroundRect& area, int nx, int ny,
                    Eigen::Index beam, SurfaceMode mode = SurfaceMode::normal);

struct WallModel {
    double thickness_m = 0.2;
    double eps_r = 5.24;
    double sigma_s_per_m = 0.123;
};

// Normal-incidence reflection coefficient of an air-backed lossy slab.
Complex slab_reflection(double f0_hz, const WallModel& wall);

// Plane-wave reflection coefficient implied by a table entry at the table's
// calibration frequency: r = (j k0 / 2) (K_h,x - K_e,y).
Complex implied_reflection(const SusceptibilityEntry& entry, double f0_hz);

// Builds a 2^bits state table whose state s targets the reflection
// coefficient amplitude * exp(j 2 pi (s-1) / 2^bits) at normal incidence,
// plus wall constants matched to the slab model. The result is verified with
// verify_state_table; amplitude outside (0, 1] is rejected.
SusceptibilityTable calibrate_state_table(int bits, double amplitude, double f0_hz, const WallModel& wall = {});

struct CalibrationCheck {
    double max_phase_error_deg = 0.0; // specular phase vs. target phase, per state
    double max_amplitude_deviation = 0.0; // relative spread of specular amplitudes
    bool passive = false;             // every implied |r| within the amplitude bound
};

// Uniform-sheet oracle: a 20-wavelength square sheet set uniformly to each
// state is illuminated at normal incidence and observed in the specular
// direction through the radiation kernels; the specular fields must track the
// target phases and share a common amplitude.
CalibrationCheck verify_state_table(const SusceptibilityTable& table, double amplitude);

// Plain-text table exchange: `# ...` comments, then one row per state
// "index Re(Ke_x) Im(Ke_x) ... Re(Kh_z) Im(Kh_z)" with index 0 reserved for
// the wall entry. Throws std::runtime_error on malformed files.
void save_table(const SusceptibilityTable& table, const std::string& path);
SusceptibilityTable load_table(const std::string& path);

} // namespace risc

#endif // RISC_EM_FORWARD_HPP
