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

#ifndef RISC_QOS_HPP
#define RISC_QOS_HPP

#include "risc/beamforming.hpp"
#include "risc/em_forward.hpp"
#include "risc/scene.hpp"
#include "risc/types.hpp"

namespace risc {

struct ThroughputReport {
    RVector per_user;          // bit/s/Hz
    double worst = 0.0;        // min over users
    double total = 0.0;        // sum over users, breaks ties among dead zones
    double cost = 0.0;         // 1/worst, +inf when worst == 0
    bool zf_degenerate = false;
};

// Strict-weak ordering on reports: smaller cost first; among infinite costs
// the larger total throughput wins.
bool cost_less(const ThroughputReport& a, const ThroughputReport& b);

// Per-user spectral efficiency for the field matrix F (L x B with B == L,
// beam b serving user b):
//
//     T_l = log2( 1 + |F[l,l]|^2 / ( sum_{b != l} |F[l,b]|^2 + L s2 / P ) )
//
// Power bookkeeping convention, fixed here and nowhere else: F is computed
// from weights already scaled to the total radiated power, and the noise
// enters as the dimensionless ratio L * noise_w / power_w added to the
// interference. Throws on non-finite field entries.
ThroughputReport throughput(const CMatrix& fields, double power_w, double noise_w);

// Immutable per-time-step evaluation context. Shares the geometry-dependent
// factors across every candidate evaluation of the step; the wall
// contribution is folded into a constant channel term so a candidate costs
// one P-sized scaling and one L x P x M product.
struct EvalContext {
    const SceneGeometry* scene = nullptr;
    const SusceptibilityTable* table = nullptr;
    SurfaceMode mode = SurfaceMode::normal;
    Eigen::Index num_ris = 0;
    CMatrix ris_rad_e;      // L x P: obs_e-scaled radiation columns
    CMatrix ris_rad_h;      // L x P
    CMatrix ris_h1;         // P x M
    CMatrix ris_h1h;        // P x M
    CMatrix wall_channel;   // L x M, configuration-independent part
    double power_w = 0.0;
    double noise_w = 0.0;
    double zf_rtol = 1e-10;
};

EvalContext make_context(const SceneGeometry& scene, const SusceptibilityTable& table, const IncidenceMatrix& inc,
                         const RadiationMatrix& rad, double power_w, double noise_w,
                         SurfaceMode mode = SurfaceMode::normal, double zf_rtol = 1e-10);

// Cascaded channel for one candidate under the context.
CMatrix context_channel(const EvalContext& ctx, const RisConfiguration& s);

// The optimizer fitness: cascaded channel -> ZF weights -> fields ->
// throughput. Deterministic for fixed inputs.
ThroughputReport evaluate_cost(const RisConfiguration& s, const EvalContext& ctx);

} // namespace risc

#endif // RISC_QOS_HPP
