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

#ifndef RISC_TYPES_HPP
#define RISC_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace risc {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;
using IVector = Eigen::VectorXi;

// Meta-atom state vector: P entries, each in {1 .. 2^B}.
using RisConfiguration = Eigen::VectorXi;

namespace constants {
// mu0 is kept at the classic 4*pi*1e-7 value so that sqrt(eps0*mu0) equals
// 1/c0 to machine precision, as the geometry invariants require.
inline constexpr double c0 = 299792458.0;          // m/s
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double mu0 = 4.0 * pi * 1e-7;     // H/m
inline constexpr double eps0 = 1.0 / (mu0 * c0 * c0); // F/m
inline const double eta0 = std::sqrt(mu0 / eps0);  // Ohm, ~376.73
} // namespace constants

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

// splitmix64, used as the documented seed-splitting scheme: every RNG stream
// in a run is derived from one master seed and a small stream index.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(splitmix64(master) ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
}

// Parallel map over [0, n). Items must be independent; results are written
// into caller-owned slots, so serial and parallel execution give identical
// output. threads <= 1 runs inline.
inline void parallel_for_each(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const unsigned workers = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

inline unsigned default_thread_count() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1u : hc;
}

} // namespace risc

#endif // RISC_TYPES_HPP
