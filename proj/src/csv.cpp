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

#include "risc/csv.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace risc {

namespace {

std::ofstream open_csv(const std::string& path, bool timestamp) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    if (timestamp) {
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[64];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        out << "# generated " << buf << "\n";
    }
    return out;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_results_csv(const std::string& path, const std::vector<const RunResult*>& results, Eigen::Index users,
                       bool timestamp) {
    std::ofstream out = open_csv(path, timestamp);
    out << "# throughput columns in bit/s/Hz; cost dimensionless; delta_s_mean in state levels\n";
    out << "step,variant";
    out << ",T_worst";
    for (Eigen::Index l = 1; l <= users; ++l) out << ",T_" << l;
    out << ",cost,iterations,stored,restored,delta_s_mean\n";
    for (const RunResult* run : results) {
        for (const StepRecord& rec : run->per_step) {
            out << rec.step << ',' << to_string(run->variant) << ',' << format_double(rec.report.worst);
            for (Eigen::Index l = 0; l < users; ++l)
                out << ',' << (l < rec.report.per_user.size() ? format_double(rec.report.per_user[l]) : "");
            out << ',' << format_double(rec.report.cost) << ',' << rec.iterations << ',' << rec.stored << ','
                << rec.restored << ',' << format_double(rec.delta_s_mean) << '\n';
        }
    }
}

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace, bool timestamp) {
    std::ofstream out = open_csv(path, timestamp);
    out << "# phi_best dimensionless (1 / worst throughput); sigma in squared state levels\n";
    out << "step,iter,phi_best,sigma,rho,psi,theta,beta,kappa,event\n";
    for (const TraceRow& row : trace) {
        out << row.step << ',' << row.iteration << ',' << format_double(row.phi_best) << ','
            << format_double(row.sigma) << ',' << format_double(row.rho) << ',' << format_double(row.psi) << ','
            << format_double(row.theta) << ',' << format_double(row.beta) << ',' << format_double(row.kappa) << ','
            << to_string(row.event) << '\n';
    }
}

void write_footprint_csv(const std::string& path, const Footprint& fp, bool timestamp) {
    std::ofstream out = open_csv(path, timestamp);
    out << "# x and y in meters, power = |F_b|^2 under the fixed bookkeeping convention\n";
    out << "x,y,power\n";
    for (Eigen::Index iy = 0; iy < fp.ys.size(); ++iy)
        for (Eigen::Index ix = 0; ix < fp.xs.size(); ++ix)
            out << format_double(fp.xs[ix]) << ',' << format_double(fp.ys[iy]) << ','
                << format_double(fp.power(iy, ix)) << '\n';
}

void write_noise_sweep_csv(const std::string& path, const std::vector<double>& levels_dbm,
                           const std::vector<Variant>& variants, const RMatrix& worst_throughput_avg,
                           bool timestamp) {
    std::ofstream out = open_csv(path, timestamp);
    out << "# average worst-case throughput in bit/s/Hz per noise level and variant\n";
    out << "sigma2_dbm";
    for (Variant v : variants) out << ',' << to_string(v);
    out << '\n';
    for (std::size_t row = 0; row < levels_dbm.size(); ++row) {
        out << format_double(levels_dbm[row]);
        for (std::size_t col = 0; col < variants.size(); ++col)
            out << ',' << format_double(worst_throughput_avg(static_cast<Eigen::Index>(row),
                                                             static_cast<Eigen::Index>(col)));
        out << '\n';
    }
}

void write_brute_force_csv(const std::string& path, const std::vector<BruteForceRow>& rows, Eigen::Index genes,
                           bool timestamp) {
    std::ofstream out = open_csv(path, timestamp);
    out << "# exhaustive sweep; index counts gene 1 fastest, T_worst in bit/s/Hz\n";
    out << "index";
    for (Eigen::Index p = 1; p <= genes; ++p) out << ",s_" << p;
    out << ",T_worst,cost\n";
    for (const BruteForceRow& row : rows) {
        out << row.index;
        for (Eigen::Index p = 0; p < genes; ++p) out << ',' << row.config[p];
        out << ',' << format_double(row.worst) << ',' << format_double(row.cost) << '\n';
    }
}

} // namespace risc
