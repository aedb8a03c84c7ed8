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

#include "risc/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace risc {

namespace {

Vec3 uniform_point(const GroundRect& area, double height, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ux(area.x_min, area.x_max);
    std::uniform_real_distribution<double> uy(area.y_min, area.y_max);
    return {ux(rng), uy(rng), height};
}

bool separated(const Eigen::Matrix3Xd& positions, Eigen::Index count, const Vec3& candidate, double min_sep) {
    for (Eigen::Index i = 0; i < count; ++i)
        if ((positions.col(i) - candidate).norm() < min_sep) return false;
    return true;
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

Trajectory gen_aperiodic(const GroundRect& area, int users, int steps, const MobilityParams& mobility,
                         std::mt19937_64& rng) {
    if (users < 1 || steps < 1) throw std::invalid_argument("trajectory: users and steps must be at least 1");
    Trajectory traj;
    traj.kind = TrajectoryKind::aperiodic;
    traj.snapshots.resize(static_cast<std::size_t>(steps));

    Eigen::Matrix3Xd pos(3, users);
    std::vector<Vec3> waypoints(static_cast<std::size_t>(users));
    for (int l = 0; l < users; ++l) {
        Vec3 p = uniform_point(area, mobility.user_height, rng);
        for (int tries = 0; tries < 1000 && !separated(pos, l, p, mobility.min_separation); ++tries)
            p = uniform_point(area, mobility.user_height, rng);
        pos.col(l) = p;
        waypoints[static_cast<std::size_t>(l)] = uniform_point(area, mobility.user_height, rng);
    }

    const double step_len = mobility.v_max * mobility.dt;
    for (int c = 0; c < steps; ++c) {
        if (c > 0) {
            for (int l = 0; l < users; ++l) {
                Vec3& wp = waypoints[static_cast<std::size_t>(l)];
                const Vec3 here = pos.col(l);
                Vec3 next = here;
                const double dist = (wp - here).norm();
                if (dist <= step_len) {
                    next = wp;
                    wp = uniform_point(area, mobility.user_height, rng);
                } else if (dist > 0.0) {
                    next = here + (wp - here) * (step_len / dist);
                }
                if (!separated(pos, l, next, mobility.min_separation)) {
                    next = here; // hold and aim elsewhere
                    wp = uniform_point(area, mobility.user_height, rng);
                }
                pos.col(l) = next;
            }
        }
        traj.snapshots[static_cast<std::size_t>(c)] = UserSnapshot{c + 1, pos};
    }
    return traj;
}

Trajectory gen_periodic(const GroundRect& area, int users, int steps, int period, const MobilityParams& mobility,
                        std::mt19937_64& rng) {
    if (users < 1 || steps < 1) throw std::invalid_argument("trajectory: users and steps must be at least 1");
    if (period < 2) throw std::invalid_argument("trajectory: period must be at least 2");
    if (period > steps) throw std::invalid_argument("trajectory: period cannot exceed the step count");

    // Circular loops sampled at `period` phases; the chord between phases is
    // 2 r sin(pi/period) <= 2 pi r / period, so r <= v_max dt period / (2 pi)
    // keeps the displacement bound.
    const double r_max_speed = mobility.v_max * mobility.dt * period / (2.0 * constants::pi);
    const double r_max_area = 0.45 * std::min(area.x_max - area.x_min, area.y_max - area.y_min);
    const double r_hi = std::min(r_max_speed, r_max_area);
    if (!(r_hi > 0.0)) throw std::invalid_argument("trajectory: area or speed too small for a periodic loop");

    std::uniform_real_distribution<double> radius_draw(0.3 * r_hi, r_hi);
    std::uniform_real_distribution<double> phase_draw(0.0, 2.0 * constants::pi);

    std::vector<Eigen::Matrix3Xd> phases(static_cast<std::size_t>(period), Eigen::Matrix3Xd(3, users));
    for (int l = 0; l < users; ++l) {
        bool placed = false;
        for (int tries = 0; tries < 1000 && !placed; ++tries) {
            const double r = radius_draw(rng);
            const double phi0 = phase_draw(rng);
            GroundRect inner{area.x_min + r, area.x_max - r, area.y_min + r, area.y_max - r};
            if (inner.x_max <= inner.x_min || inner.y_max <= inner.y_min) continue;
            const Vec3 center = uniform_point(inner, mobility.user_height, rng);
            placed = true;
            for (int k = 0; k < period && placed; ++k) {
                const double ang = phi0 + 2.0 * constants::pi * k / period;
                const Vec3 p = center + Vec3(r * std::cos(ang), r * std::sin(ang), 0.0);
                if (!separated(phases[static_cast<std::size_t>(k)], l, p, mobility.min_separation)) placed = false;
            }
            if (!placed) continue;
            for (int k = 0; k < period; ++k) {
                const double ang = phi0 + 2.0 * constants::pi * k / period;
                phases[static_cast<std::size_t>(k)].col(l) =
                    center + Vec3(r * std::cos(ang), r * std::sin(ang), 0.0);
            }
        }
        if (!placed) throw std::runtime_error("trajectory: could not place a periodic loop at the separation bound");
    }

    Trajectory traj;
    traj.kind = TrajectoryKind::periodic;
    traj.period = period;
    traj.snapshots.resize(static_cast<std::size_t>(steps));
    for (int c = 0; c < steps; ++c)
        traj.snapshots[static_cast<std::size_t>(c)] = UserSnapshot{c + 1, phases[static_cast<std::size_t>(c % period)]};
    return traj;
}

Trajectory import_trajectory(const std::string& path, const MobilityParams& mobility) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("trajectory: cannot read " + path);
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    // (step, user) -> position, gathered then validated for contiguity
    std::vector<std::vector<Vec3>> rows_by_step;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != "step,user,x,y,z")
                throw std::runtime_error("trajectory: expected header step,user,x,y,z in " + path);
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        std::string field;
        long values_i[2];
        double values_d[3];
        for (int f = 0; f < 5; ++f) {
            if (!std::getline(row, field, ','))
                throw std::runtime_error("trajectory: malformed row at line " + std::to_string(line_no));
            try {
                if (f < 2)
                    values_i[f] = std::stol(field);
                else
                    values_d[f - 2] = std::stod(field);
            } catch (const std::exception&) {
                throw std::runtime_error("trajectory: malformed row at line " + std::to_string(line_no));
            }
        }
        const long step = values_i[0];
        const long user = values_i[1];
        if (step < 1 || user < 1)
            throw std::runtime_error("trajectory: step and user must be 1-based at line " + std::to_string(line_no));
        if (rows_by_step.size() < static_cast<std::size_t>(step)) rows_by_step.resize(static_cast<std::size_t>(step));
        auto& users = rows_by_step[static_cast<std::size_t>(step - 1)];
        if (users.size() < static_cast<std::size_t>(user)) users.resize(static_cast<std::size_t>(user), Vec3::Zero());
        users[static_cast<std::size_t>(user - 1)] = Vec3(values_d[0], values_d[1], values_d[2]);
    }
    if (rows_by_step.empty()) throw std::runtime_error("trajectory: no data rows in " + path);

    const std::size_t user_count = rows_by_step.front().size();
    Trajectory traj;
    traj.kind = TrajectoryKind::imported;
    traj.snapshots.resize(rows_by_step.size());
    for (std::size_t c = 0; c < rows_by_step.size(); ++c) {
        if (rows_by_step[c].size() != user_count || user_count == 0)
            throw std::runtime_error("trajectory: inconsistent user count at step " + std::to_string(c + 1));
        Eigen::Matrix3Xd pos(3, static_cast<Eigen::Index>(user_count));
        for (std::size_t l = 0; l < user_count; ++l) pos.col(static_cast<Eigen::Index>(l)) = rows_by_step[c][l];
        traj.snapshots[c] = UserSnapshot{static_cast<int>(c + 1), pos};
    }

    const double bound = mobility.v_max * mobility.dt + 1e-9;
    for (std::size_t c = 1; c < traj.snapshots.size(); ++c) {
        for (Eigen::Index l = 0; l < traj.snapshots[c].num_users(); ++l) {
            const double moved = (traj.snapshots[c].positions.col(l) - traj.snapshots[c - 1].positions.col(l)).norm();
            if (moved > bound) {
                std::ostringstream w;
                w << "user " << l + 1 << " moves " << moved << " m between steps " << c << " and " << c + 1
                  << " (bound " << mobility.v_max * mobility.dt << " m)";
                traj.warnings.push_back(w.str());
            }
        }
    }
    return traj;
}

void export_trajectory(const Trajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("trajectory: cannot write " + path);
    out << "step,user,x,y,z\n";
    for (const UserSnapshot& snap : traj.snapshots) {
        for (Eigen::Index l = 0; l < snap.num_users(); ++l) {
            out << snap.step << ',' << l + 1 << ',' << format_double(snap.positions(0, l)) << ','
                << format_double(snap.positions(1, l)) << ',' << format_double(snap.positions(2, l)) << '\n';
        }
    }
}

const char* to_string(Variant variant) {
    switch (variant) {
        case Variant::me_risc: return "me_risc";
        case Variant::ga_risc: return "ga_risc";
        case Variant::no_ris: return "no_ris";
        default: return "ris_only";
    }
}

double RunResult::worst_throughput_average() const {
    if (per_step.empty()) return 0.0;
    double sum = 0.0;
    for (const StepRecord& rec : per_step) sum += rec.report.worst;
    return sum / static_cast<double>(per_step.size());
}

RunResult run(Variant variant, const SceneGeometry& scene, const SusceptibilityTable& table, const Trajectory& traj,
              double power_w, double noise_w, const GaParams& params, std::uint64_t seed, unsigned threads,
              double zf_rtol) {
    if (traj.snapshots.empty()) throw std::invalid_argument("run: empty trajectory");
    if (scene.num_elements() < traj.users()) throw std::invalid_argument("run: fewer antennas than users");

    SceneGeometry variant_scene = scene;
    GaParams variant_params = params;
    const bool optimized = variant == Variant::me_risc || variant == Variant::ga_risc || variant == Variant::ris_only;
    switch (variant) {
        case Variant::no_ris:
            variant_scene = relabel_ris_as_wall(scene);
            break;
        case Variant::ris_only:
            variant_scene = remove_wall(scene);
            break;
        case Variant::ga_risc:
            variant_params.nu_max = 0.0;
            variant_params.beta_max = 0.0;
            variant_params.kappa_max = 0.0;
            break;
        default:
            break;
    }

    const IncidenceMatrix inc = incidence_matrix(variant_scene);
    MemoryPool memory;
    memory.capacity = variant_params.memory_capacity;

    RunResult result;
    result.variant = variant;
    result.per_step.reserve(traj.snapshots.size());
    for (const UserSnapshot& snapshot : traj.snapshots) {
        const std::string issue = check_snapshot(variant_scene, snapshot);
        if (!issue.empty()) std::cerr << "run(" << to_string(variant) << "): warning: " << issue << "\n";

        const RadiationMatrix rad = radiation_matrix(variant_scene, snapshot.positions);
        const EvalContext ctx = make_context(variant_scene, table, inc, rad, power_w, noise_w, SurfaceMode::normal, zf_rtol);

        StepRecord rec;
        rec.step = snapshot.step;
        if (optimized) {
            const StepResult step = optimize_step(ctx, variant_params, memory, derive_seed(seed, snapshot.step),
                                                  threads, snapshot.step);
            rec.config = step.best;
            rec.report = step.report;
            rec.iterations = step.iterations;
            rec.stored = step.stored_events;
            rec.restored = step.restored_events;
            rec.delta_s_mean =
                (step.best - step.first_iteration_best).cast<double>().cwiseAbs().mean();
            result.trace.insert(result.trace.end(), step.trace.begin(), step.trace.end());
        } else {
            rec.config = RisConfiguration(0);
            rec.report = evaluate_cost(rec.config, ctx);
        }
        result.per_step.push_back(std::move(rec));
    }
    return result;
}

} // namespace risc
