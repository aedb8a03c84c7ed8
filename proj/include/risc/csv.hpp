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
// CSV writers for every artifact the tools produce. Numbers are printed with
// std::to_chars (shortest round-trip form), so identical data gives
// byte-identical files. The optional timestamp comment is the only
// non-reproducible line and can be suppressed.

#ifndef RISC_CSV_HPP
#define RISC_CSV_HPP

#include "risc/em_forward.hpp"
#include "risc/scenario.hpp"

#include <string>
#include <vector>

namespace risc {

std::string format_double(double v);

// step,variant,T_worst,T_1..T_L,cost,iterations,stored,restored,delta_s_mean
void write_results_csv(const std::string& path, const std::vector<const RunResult*>& results, Eigen::Index users,
                       bool timestamp);

// step,iter,phi_best,sigma,rho,psi,theta,beta,kappa,event
void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace, bool timestamp);

// x,y,power
void write_footprint_csv(const std::string& path, const Footprint& fp, bool timestamp);

// sigma2_dbm,<variant...>: one row per noise level, T_worst averaged over
// the trajectory per variant.
void write_noise_sweep_csv(const std::string& path, const std::vector<double>& levels_dbm,
                           const std::vector<Variant>& variants, const RMatrix& worst_throughput_avg,
                           bool timestamp);

struct BruteForceRow {
    std::uint64_t index = 0;
    RisConfiguration config;
    double worst = 0.0;
    double cost = 0.0;
};

// index,s_1..s_P,T_worst,cost
void write_brute_force_csv(const std::string& path, const std::vector<BruteForceRow>& rows, Eigen::Index genes,
                           bool timestamp);

} // namespace risc

#endif // RISC_CSV_HPP
