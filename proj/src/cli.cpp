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

#include "risc/cli.hpp"

#include "risc/config.hpp"
#include "risc/csv.hpp"
#include "risc/me_ga.hpp"
#include "risc/scenario.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

namespace risc {

namespace {

namespace fs = std::filesystem;

// Seed streams: 0 trajectory, 1.. per variant. Per-step optimizer seeds are
// derived inside run() from the variant stream.
std::uint64_t variant_seed(std::uint64_t master, Variant v) {
    return derive_seed(master, 1 + static_cast<std::uint64_t>(v));
}

struct CommonOpts {
    std::string config_path;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    unsigned threads = 0;
    bool no_timestamp = false;
    std::string variant_name;
};

struct Workspace {
    RunConfig cfg;
    SceneGeometry scene;
    SusceptibilityTable table;
    Trajectory traj;
    fs::path out;
    bool timestamp = true;
    unsigned threads = 1;
    std::uint64_t master_seed = 1;
    std::vector<fs::path> written;

    fs::path file(const std::string& name) {
        const fs::path p = out / name;
        written.push_back(p);
        return p;
    }
};

Variant parse_variant(const std::string& name) {
    if (name == "me_risc") return Variant::me_risc;
    if (name == "ga_risc") return Variant::ga_risc;
    if (name == "no_ris") return Variant::no_ris;
    if (name == "ris_only") return Variant::ris_only;
    throw ConfigError("config: unknown variant \"" + name + "\" (me_risc, ga_risc, no_ris, ris_only)");
}

SceneGeometry variant_geometry(const SceneGeometry& scene, Variant v) {
    switch (v) {
        case Variant::no_ris: return relabel_ris_as_wall(scene);
        case Variant::ris_only: return remove_wall(scene);
        default: return scene;
    }
}

Workspace make_workspace(const CommonOpts& opts) {
    Workspace ws;
    ws.cfg = parse_config(opts.config_path);
    ws.scene = build_scene(ws.cfg.scene);
    ws.table = ws.cfg.table_path.empty()
                   ? calibrate_state_table(ws.cfg.table_bits, ws.cfg.table_amplitude, ws.cfg.scene.f0_hz,
                                           ws.cfg.wall_model)
                   : load_table(ws.cfg.table_path);
    if (ws.table.num_states() < 2) throw ConfigError("config: table has fewer than two states");

    std::mt19937_64 traj_rng(derive_seed(opts.seed, 0));
    switch (ws.cfg.kind) {
        case TrajectoryKind::aperiodic:
            ws.traj = gen_aperiodic(ws.cfg.scene.user_area, ws.cfg.users, ws.cfg.steps, ws.cfg.mobility, traj_rng);
            break;
        case TrajectoryKind::periodic:
            ws.traj = gen_periodic(ws.cfg.scene.user_area, ws.cfg.users, ws.cfg.steps, ws.cfg.period,
                                   ws.cfg.mobility, traj_rng);
            break;
        case TrajectoryKind::imported:
            ws.traj = import_trajectory(ws.cfg.trajectory_path, ws.cfg.mobility);
            for (const std::string& w : ws.traj.warnings) std::cerr << "trajectory: warning: " << w << "\n";
            break;
    }

    ws.out = fs::path(opts.out_dir);
    fs::create_directories(ws.out);
    ws.timestamp = !opts.no_timestamp;
    ws.threads = opts.threads == 0 ? default_thread_count() : opts.threads;
    ws.master_seed = opts.seed;
    return ws;
}

void remove_partial_outputs(Workspace& ws) {
    std::error_code ec;
    for (const fs::path& p : ws.written) fs::remove(p, ec);
}

int cmd_run(Workspace& ws, const std::string& variant_name) {
    const Variant v = parse_variant(variant_name.empty() ? "me_risc" : variant_name);
    const RunResult res = run(v, ws.scene, ws.table, ws.traj, ws.cfg.power_w, ws.cfg.noise_w, ws.cfg.ga,
                              variant_seed(ws.master_seed, v), ws.threads, ws.cfg.zf_rtol);
    write_results_csv(ws.file("results.csv").string(), {&res}, ws.traj.users(), ws.timestamp);
    write_trace_csv(ws.file(std::string("trace_") + to_string(v) + ".csv").string(), res.trace, ws.timestamp);
    std::cout << "run " << to_string(v) << ": T_worst_avg = " << format_double(res.worst_throughput_average())
              << " bit/s/Hz over " << ws.traj.steps() << " steps\n";
    return 0;
}

int cmd_compare(Workspace& ws, bool with_ris_only) {
    std::vector<Variant> variants{Variant::me_risc, Variant::ga_risc, Variant::no_ris};
    if (with_ris_only) variants.push_back(Variant::ris_only);

    std::vector<RunResult> results;
    results.reserve(variants.size());
    for (Variant v : variants)
        results.push_back(run(v, ws.scene, ws.table, ws.traj, ws.cfg.power_w, ws.cfg.noise_w, ws.cfg.ga,
                              variant_seed(ws.master_seed, v), ws.threads, ws.cfg.zf_rtol));

    std::vector<const RunResult*> pointers;
    for (const RunResult& r : results) pointers.push_back(&r);
    write_results_csv(ws.file("results.csv").string(), pointers, ws.traj.users(), ws.timestamp);
    write_trace_csv(ws.file("trace_me.csv").string(), results[0].trace, ws.timestamp);
    write_trace_csv(ws.file("trace_ga.csv").string(), results[1].trace, ws.timestamp);
    if (with_ris_only) write_trace_csv(ws.file("trace_ris_only.csv").string(), results[3].trace, ws.timestamp);

    for (const RunResult& r : results)
        std::cout << "compare " << to_string(r.variant)
                  << ": T_worst_avg = " << format_double(r.worst_throughput_average()) << " bit/s/Hz\n";
    return 0;
}

int cmd_sweep_noise(Workspace& ws) {
    if (ws.cfg.noise_sweep_dbm.empty())
        throw ConfigError("config: scene.noise_sweep_dbm is required for sweep-noise");
    const std::vector<Variant> variants{Variant::me_risc, Variant::ga_risc, Variant::no_ris};
    RMatrix averages(static_cast<Eigen::Index>(ws.cfg.noise_sweep_dbm.size()),
                     static_cast<Eigen::Index>(variants.size()));
    for (std::size_t row = 0; row < ws.cfg.noise_sweep_dbm.size(); ++row) {
        const double noise_w = dbm_to_watt(ws.cfg.noise_sweep_dbm[row]);
        for (std::size_t col = 0; col < variants.size(); ++col) {
            const RunResult res =
                run(variants[col], ws.scene, ws.table, ws.traj, ws.cfg.power_w, noise_w, ws.cfg.ga,
                    variant_seed(ws.master_seed, variants[col]), ws.threads, ws.cfg.zf_rtol);
            averages(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
                res.worst_throughput_average();
        }
    }
    write_noise_sweep_csv(ws.file("noise_sweep.csv").string(), ws.cfg.noise_sweep_dbm, variants, averages,
                          ws.timestamp);
    std::cout << "sweep-noise: " << ws.cfg.noise_sweep_dbm.size() << " noise levels x " << variants.size()
              << " variants\n";
    return 0;
}

int cmd_footprint(Workspace& ws, const std::string& variant_name) {
    const Variant v = parse_variant(variant_name.empty() ? "me_risc" : variant_name);
    const RunResult res = run(v, ws.scene, ws.table, ws.traj, ws.cfg.power_w, ws.cfg.noise_w, ws.cfg.ga,
                              variant_seed(ws.master_seed, v), ws.threads, ws.cfg.zf_rtol);

    const SceneGeometry geometry = variant_geometry(ws.scene, v);
    const IncidenceMatrix inc = incidence_matrix(geometry);
    for (int step : ws.cfg.footprint_steps) {
        if (step < 1 || step > ws.traj.steps())
            throw ConfigError("config: outputs.footprint_steps: step " + std::to_string(step) + " outside 1.." +
                              std::to_string(ws.traj.steps()));
        const UserSnapshot& snap = ws.traj.snapshots[static_cast<std::size_t>(step - 1)];
        const RadiationMatrix rad = radiation_matrix(geometry, snap.positions);
        const EvalContext ctx = make_context(geometry, ws.table, inc, rad, ws.cfg.power_w, ws.cfg.noise_w,
                                             SurfaceMode::normal, ws.cfg.zf_rtol);
        const RisConfiguration& s = res.per_step[static_cast<std::size_t>(step - 1)].config;
        const CMatrix ups = context_channel(ctx, s);
        const BeamWeights w = zf_weights(ups, ws.cfg.power_w, ws.cfg.zf_rtol);
        for (int beam : ws.cfg.footprint_beams) {
            if (beam < 1 || beam > snap.num_users())
                throw ConfigError("config: outputs.footprint_beams: beam " + std::to_string(beam) +
                                  " outside 1.." + std::to_string(snap.num_users()));
            const Footprint fp = footprint(geometry, ws.table, s, inc, w.A, ws.cfg.scene.user_area,
                                           ws.cfg.footprint_nx, ws.cfg.footprint_ny, beam - 1);
            std::string name = std::string("footprint_") + to_string(v) + "_step" + std::to_string(step) +
                               "_beam" + std::to_string(beam) + ".csv";
            write_footprint_csv(ws.file(name).string(), fp, ws.timestamp);
        }
    }
    std::cout << "footprint: wrote " << ws.cfg.footprint_steps.size() * ws.cfg.footprint_beams.size()
              << " grids for " << to_string(v) << "\n";
    return 0;
}

int cmd_brute_force(Workspace& ws) {
    const Eigen::Index genes = ws.scene.num_ris_patches();
    const int bits = ws.table.bits;
    const double log2_size = static_cast<double>(bits) * static_cast<double>(genes);
    if (log2_size > 20.0)
        throw ConfigError("config: brute-force needs bits * patches <= 20 (got " +
                          std::to_string(static_cast<long>(log2_size)) + ")");

    const UserSnapshot& snap = ws.traj.snapshots.front();
    const IncidenceMatrix inc = incidence_matrix(ws.scene);
    const RadiationMatrix rad = radiation_matrix(ws.scene, snap.positions);
    const EvalContext ctx = make_context(ws.scene, ws.table, inc, rad, ws.cfg.power_w, ws.cfg.noise_w,
                                         SurfaceMode::normal, ws.cfg.zf_rtol);

    const std::uint64_t total = 1ULL << static_cast<unsigned>(log2_size);
    const std::uint64_t mask = (1ULL << static_cast<unsigned>(bits)) - 1ULL;
    std::vector<BruteForceRow> rows(total);
    parallel_for_each(total, ws.threads, [&](std::size_t index) {
        RisConfiguration s(genes);
        for (Eigen::Index p = 0; p < genes; ++p)
            s[p] = static_cast<int>((index >> (static_cast<unsigned>(bits) * static_cast<unsigned>(p))) & mask) + 1;
        const ThroughputReport rep = evaluate_cost(s, ctx);
        rows[index] = {static_cast<std::uint64_t>(index), std::move(s), rep.worst, rep.cost};
    });
    write_brute_force_csv(ws.file("brute_force.csv").string(), rows, genes, ws.timestamp);

    std::uint64_t best = 0;
    for (std::uint64_t i = 1; i < total; ++i)
        if (rows[i].cost < rows[best].cost) best = i;
    std::cout << "brute-force: " << total << " configurations, optimum index " << best << " with T_worst = "
              << format_double(rows[best].worst) << " bit/s/Hz\n";
    return 0;
}

} // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"riscontrol batch front-end: simulate and optimize a reconfigurable surface"};
    app.require_subcommand(1);

    CommonOpts opts;
    bool compare_ris_only = false;

    auto add_common = [&](CLI::App* sub, bool with_variant) {
        sub->add_option("--config", opts.config_path, "run configuration file (JSON)")->required();
        sub->add_option("--seed", opts.seed, "master seed; every random stream derives from it");
        sub->add_option("--out", opts.out_dir, "output directory (default: out)");
        sub->add_option("--threads", opts.threads, "fitness evaluation threads, 0 = all cores");
        sub->add_flag("--no-timestamp", opts.no_timestamp, "omit the timestamp comment for byte-stable outputs");
        if (with_variant)
            sub->add_option("--variant", opts.variant_name, "control variant: me_risc, ga_risc, no_ris, ris_only");
    };

    CLI::App* sub_run = app.add_subcommand("run", "run one control variant over the trajectory");
    add_common(sub_run, true);
    CLI::App* sub_compare = app.add_subcommand("compare", "run me_risc, ga_risc and no_ris side by side");
    add_common(sub_compare, false);
    sub_compare->add_flag("--ris-only", compare_ris_only, "also run the ris_only variant");
    CLI::App* sub_sweep = app.add_subcommand("sweep-noise", "repeat the comparison over the configured noise list");
    add_common(sub_sweep, false);
    CLI::App* sub_footprint = app.add_subcommand("footprint", "export power footprint grids for selected steps");
    add_common(sub_footprint, true);
    CLI::App* sub_brute = app.add_subcommand("brute-force", "exhaustive cost table on a tiny instance");
    add_common(sub_brute, false);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("risctl");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    Workspace ws;
    try {
        ws = make_workspace(opts);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (sub_run->parsed()) return cmd_run(ws, opts.variant_name);
        if (sub_compare->parsed()) return cmd_compare(ws, compare_ris_only);
        if (sub_sweep->parsed()) return cmd_sweep_noise(ws);
        if (sub_footprint->parsed()) return cmd_footprint(ws, opts.variant_name);
        if (sub_brute->parsed()) return cmd_brute_force(ws);
    } catch (const ConfigError& e) {
        remove_partial_outputs(ws);
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        remove_partial_outputs(ws);
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace risc
