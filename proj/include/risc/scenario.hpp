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

#ifndef RISC_SCENARIO_HPP
#define RISC_SCENARIO_HPP

#include "risc/me_ga.hpp"
#include "risc/qos.hpp"
#include "risc/scene.hpp"
#include "risc/types.hpp"

#include <random>
#include <string>
#include <vector>

namespace risc {

enum class TrajectoryKind { aperiodic, periodic, imported };

struct MobilityParams {
    double v_max = 1.5;          // m/s, pedestrian
    double dt = 1.0;             // s per time step
    double user_height = 1.5;    // m
    double min_separation = 0.1; // m
};

struct Trajectory {
    TrajectoryKind kind = TrajectoryKind::aperiodic;
    std::vector<UserSnapshot> snapshots; // C entries, steps 1..C
    int period = 0;                      // > 0 for periodic trajectories
    std::vector<std::string> warnings;   // import diagnostics (not fatal)

    int steps() const { return static_cast<int>(snapshots.size()); }
    Eigen::Index users() const { return snapshots.empty() ? 0 : snapshots.front().num_users(); }
};

// Random-waypoint walks: every user heads to a uniform waypoint at v_max and
// redraws on arrival. Per-step displacement never exceeds v_max * dt.
Trajectory gen_aperiodic(const GroundRect& area, int users, int steps, const MobilityParams& mobility,
                         std::mt19937_64& rng);

// Closed per-user loops sampled at `period` phases, so snapshot(c) equals
// snapshot(c + period) bit-exactly. period must be in [2, steps].
Trajectory gen_periodic(const GroundRect& area, int users, int steps, int period, const MobilityParams& mobility,
                        std::mt19937_64& rng);

// CSV exchange, header "step,user,x,y,z", meters, steps 1-based contiguous.
// import throws std::runtime_error on malformed rows, inconsistent user
// counts or an empty file; a violated speed bound is only recorded in
// Trajectory::warnings.
Trajectory import_trajectory(const std::string& path, const MobilityParams& mobility = {});
void export_trajectory(const Trajectory& traj, const std::string& path);

enum class Variant { me_risc, ga_risc, no_ris, ris_only };

const char* to_string(Variant variant);

struct StepRecord {
    int step = 0;
    RisConfiguration config;   // empty for no_ris
    ThroughputReport report;
    int iterations = 0;
    int stored = 0;
    int restored = 0;
    double delta_s_mean = 0.0; // mean_p |s_best(1),p - s_opt,p|, 0 for no_ris
};

struct RunResult {
    Variant variant = Variant::me_risc;
    std::vector<StepRecord> per_step;
    std::vector<TraceRow> trace;

    double worst_throughput_average() const;
};

// Drives the C-step loop for one control variant:
//   me_risc  - memory-enhanced optimizer, one memory pool threaded across steps
//   ga_risc  - same optimizer with nu_max = beta_max = kappa_max = 0
//   no_ris   - whole surface behaves as wall, no optimization
//   ris_only - wall patches removed, memory-enhanced optimizer
// Per-step optimizer seeds derive from `seed` and the step index, so two
// variants called with the same seed are paired step by step.
RunResult run(Variant variant, const SceneGeometry& scene, const SusceptibilityTable& table, const Trajectory& traj,
              double power_w, double noise_w, const GaParams& params, std::uint64_t seed, unsigned threads = 1,
              double zf_rtol = 1e-10);

} // namespace risc

#endif // RISC_SCENARIO_HPP
