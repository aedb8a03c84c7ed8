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

#ifndef RISC_CONFIG_HPP
#define RISC_CONFIG_HPP

#include "risc/em_forward.hpp"
#include "risc/me_ga.hpp"
#include "risc/scenario.hpp"
#include "risc/scene.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace risc {

// Configuration or config-file problem: reported with the offending field
// path and mapped to exit code 1 by the CLI.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    SceneConfig scene;
    double power_w = dbm_to_watt(46.0);
    double noise_w = dbm_to_watt(-96.0);
    double power_dbm = 46.0;
    double noise_dbm = -96.0;
    std::vector<double> noise_sweep_dbm; // optional, for sweep-noise
    double zf_rtol = 1e-10;

    // susceptibility table: calibrated from bits/amplitude unless a file is given
    int table_bits = 3;
    double table_amplitude = 1.0;
    std::string table_path;
    WallModel wall_model;

    GaParams ga;

    TrajectoryKind kind = TrajectoryKind::aperiodic;
    int users = 3;
    int steps = 100;
    int period = 10;
    std::string trajectory_path;
    MobilityParams mobility;

    // outputs
    int footprint_nx = 60;
    int footprint_ny = 40;
    std::vector<int> footprint_steps{20};
    std::vector<int> footprint_beams{1};
};

// Strict JSON parsing: unknown keys are fatal, dBm fields are converted to
// watts here, GA fields default to the standard parameter set. Throws
// ConfigError with the field path (or the line number for syntax errors).
RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

std::string describe_config_format();

} // namespace risc

#endif // RISC_CONFIG_HPP
