// SPDX-License-Identifier: Apache-2.0

#include "helpers.hpp"
#include "risc/scenario.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

using namespace risc;
using doctest::Approx;

namespace {

MobilityParams walk_params() {
    MobilityParams m;
    m.user_height = 1.5;
    return m;
}

// Shared trajectory + scene for the run() cases: small and fast.
struct MiniBench {
    SceneGeometry scene;
    SusceptibilityTable table;
    Trajectory traj;
    GaParams params;
    double power_w = dbm_to_watt(46.0);
    double noise_w = dbm_to_watt(-96.0);

    explicit MiniBench(int steps = 4) {
        SceneConfig cfg = testing::toy_config();
        const double lambda = constants::c0 / cfg.f0_hz;
        cfg.wall_width_m = cfg.wall_height_m = 2.0 * lambda;
        scene = build_scene(cfg);
        table = calibrate_state_table(1, 1.0, scene.f0);
        std::mt19937_64 rng(404);
        traj = gen_aperiodic(cfg.user_area, 2, steps, walk_params(), rng);
        params.population = 8;
        params.max_iterations = 6;
        params.memory_capacity = 6;
    }
};

} // namespace

TEST_CASE("aperiodic trajectories respect the mobility bounds") {
    const GroundRect area{-60.0, 60.0, 30.0, 110.0};
    std::mt19937_64 rng(1);
    const MobilityParams mob = walk_params();
    const Trajectory traj = gen_aperiodic(area, 3, 100, mob, rng);
    REQUIRE(traj.steps() == 100);
    REQUIRE(traj.users() == 3);
    const double bound = mob.v_max * mob.dt + 1e-12;
    for (int c = 1; c < 100; ++c) {
        const auto& prev = traj.snapshots[static_cast<std::size_t>(c - 1)].positions;
        const auto& here = traj.snapshots[static_cast<std::size_t>(c)].positions;
        for (Eigen::Index l = 0; l < 3; ++l) {
            CHECK((here.col(l) - prev.col(l)).norm() <= bound);
            CHECK(area.contains(here(0, l), here(1, l)));
            CHECK(here(2, l) == mob.user_height);
        }
    }

    SUBCASE("zero speed freezes everyone") {
        MobilityParams frozen = walk_params();
        frozen.v_max = 0.0;
        std::mt19937_64 r2(5);
        const Trajectory still = gen_aperiodic(area, 2, 10, frozen, r2);
        for (int c = 1; c < 10; ++c)
            CHECK(still.snapshots[static_cast<std::size_t>(c)].positions ==
                  still.snapshots[0].positions);
    }
}

TEST_CASE("periodic trajectories repeat bit-exactly") {
    const GroundRect area{-60.0, 60.0, 30.0, 110.0};
    std::mt19937_64 rng(2);
    const Trajectory traj = gen_periodic(area, 3, 100, 50, walk_params(), rng);
    REQUIRE(traj.period == 50);
    for (int c = 0; c + 50 < 100; ++c)
        CHECK(traj.snapshots[static_cast<std::size_t>(c)].positions ==
              traj.snapshots[static_cast<std::size_t>(c + 50)].positions);

    // two periods inside C = 100: exactly 50 distinct snapshots
    std::set<std::string> distinct;
    for (const UserSnapshot& s : traj.snapshots) {
        std::string key(reinterpret_cast<const char*>(s.positions.data()),
                        sizeof(double) * static_cast<std::size_t>(s.positions.size()));
        distinct.insert(key);
    }
    CHECK(distinct.size() == 50);

    std::mt19937_64 r2(3);
    CHECK_THROWS_AS(gen_periodic(area, 2, 10, 1, walk_params(), r2), std::invalid_argument);
    CHECK_THROWS_AS(gen_periodic(area, 2, 10, 11, walk_params(), r2), std::invalid_argument);
    const Trajectory full = gen_periodic(area, 2, 10, 10, walk_params(), r2);
    CHECK(full.steps() == 10);
}

TEST_CASE("trajectory CSV round trip and validation") {
    const GroundRect area{-20.0, 20.0, 10.0, 40.0};
    std::mt19937_64 rng(9);
    const Trajectory traj = gen_aperiodic(area, 3, 100, walk_params(), rng);
    const auto tmp = std::filesystem::temp_directory_path();
    const std::string path = (tmp / "risc_traj.csv").string();
    export_trajectory(traj, path);

    const Trajectory back = import_trajectory(path);
    REQUIRE(back.steps() == 100);
    REQUIRE(back.users() == 3);
    CHECK(back.warnings.empty());
    for (int c = 0; c < 100; ++c)
        CHECK(back.snapshots[static_cast<std::size_t>(c)].positions ==
              traj.snapshots[static_cast<std::size_t>(c)].positions);
    std::filesystem::remove(path);

    SUBCASE("malformed inputs are rejected") {
        const std::string bad = (tmp / "risc_traj_bad.csv").string();
        {
            std::ofstream out(bad);
        }
        CHECK_THROWS_AS(import_trajectory(bad), std::runtime_error);
        {
            std::ofstream out(bad);
            out << "step,user,x,y,z\n1,1,0,0\n"; // missing column
        }
        CHECK_THROWS_AS(import_trajectory(bad), std::runtime_error);
        {
            std::ofstream out(bad);
            out << "step,user,x,y,z\n1,1,0,20,1.5\n1,2,1,21,1.5\n2,1,0,20,1.5\n"; // user 2 vanishes
        }
        CHECK_THROWS_AS(import_trajectory(bad), std::runtime_error);
        {
            std::ofstream out(bad);
            out << "step,user,x,y,z\n1,1,0,20,1.5\n2,1,50,20,1.5\n"; // 50 m jump
        }
        const Trajectory fast = import_trajectory(bad);
        CHECK_FALSE(fast.warnings.empty());
        std::filesystem::remove(bad);
    }
}

TEST_CASE("no_ris never optimizes and ignores the state table") {
    const MiniBench bench;
    const RunResult res = run(Variant::no_ris, bench.scene, bench.table, bench.traj, bench.power_w, bench.noise_w,
                              bench.params, 7);
    CHECK(res.trace.empty());
    for (const StepRecord& rec : res.per_step) {
        CHECK(rec.iterations == 0);
        CHECK(rec.config.size() == 0);
        CHECK(rec.delta_s_mean == 0.0);
    }

    // a table with different reconfigurable states gives identical results
    SusceptibilityTable other = bench.table;
    for (SusceptibilityEntry& e : other.states) {
        e.Ke *= Complex(0.0, 1.0);
        e.Kh *= Complex(-0.3, 0.2);
    }
    const RunResult res2 = run(Variant::no_ris, bench.scene, other, bench.traj, bench.power_w, bench.noise_w,
                               bench.params, 7);
    for (std::size_t c = 0; c < res.per_step.size(); ++c)
        CHECK(res.per_step[c].report.worst == res2.per_step[c].report.worst);
}

TEST_CASE("zeroed memory operators make me_risc and ga_risc identical under one seed") {
    MiniBench bench;
    bench.params.nu_max = bench.params.beta_max = bench.params.kappa_max = 0.0;
    const RunResult me = run(Variant::me_risc, bench.scene, bench.table, bench.traj, bench.power_w, bench.noise_w,
                             bench.params, 11);
    const RunResult ga = run(Variant::ga_risc, bench.scene, bench.table, bench.traj, bench.power_w, bench.noise_w,
                             bench.params, 11);
    REQUIRE(me.trace.size() == ga.trace.size());
    for (std::size_t i = 0; i < me.trace.size(); ++i) {
        CHECK(me.trace[i].phi_best == ga.trace[i].phi_best);
        CHECK(me.trace[i].event == MemoryEvent::none);
    }
    for (std::size_t c = 0; c < me.per_step.size(); ++c) {
        CHECK(me.per_step[c].report.worst == ga.per_step[c].report.worst);
        CHECK(me.per_step[c].config == ga.per_step[c].config);
    }
}

TEST_CASE("paired seeds share the first-iteration best on every step") {
    MiniBench bench;
    std::mt19937_64 rng(2024);
    bench.traj = gen_periodic(GroundRect{-20.0, 20.0, 20.0, 60.0}, 2, 9, 3, walk_params(), rng);
    int ge = 0;
    const RunResult me = run(Variant::me_risc, bench.scene, bench.table, bench.traj, bench.power_w, bench.noise_w,
                             bench.params, 31);
    const RunResult ga = run(Variant::ga_risc, bench.scene, bench.table, bench.traj, bench.power_w, bench.noise_w,
                             bench.params, 31);
    for (std::size_t c = 0; c < me.per_step.size(); ++c) {
        double me_first = 0.0, ga_first = 0.0;
        for (const TraceRow& row : me.trace)
            if (row.step == static_cast<int>(c + 1) && row.iteration == 1) me_first = row.phi_best;
        for (const TraceRow& row : ga.trace)
            if (row.step == static_cast<int>(c + 1) && row.iteration == 1) ga_first = row.phi_best;
        if (me_first <= ga_first) ++ge;
    }
    CHECK(static_cast<double>(ge) / static_cast<double>(me.per_step.size()) >= 0.8);
}

TEST_CASE("memory pool persists across steps in me_risc") {
    // replicate run()'s per-step loop with a shared pool and check growth
    const MiniBench bench(6);
    const IncidenceMatrix inc = incidence_matrix(bench.scene);
    MemoryPool pool;
    pool.capacity = bench.params.memory_capacity;
    std::size_t prev = 0;
    for (const UserSnapshot& snap : bench.traj.snapshots) {
        const RadiationMatrix rad = radiation_matrix(bench.scene, snap.positions);
        const EvalContext ctx = make_context(bench.scene, bench.table, inc, rad, bench.power_w, bench.noise_w);
        optimize_step(ctx, bench.params, pool, derive_seed(77, snap.step), 1, snap.step);
        CHECK(pool.size() >= prev);
        CHECK(pool.size() <= static_cast<std::size_t>(bench.params.memory_capacity));
        prev = pool.size();
    }
}

TEST_CASE("optimization never reports worse than the first-iteration best") {
    const MiniBench bench;
    const IncidenceMatrix inc = incidence_matrix(bench.scene);
    const UserSnapshot& snap = bench.traj.snapshots.front();
    const RadiationMatrix rad = radiation_matrix(bench.scene, snap.positions);
    const EvalContext ctx = make_context(bench.scene, bench.table, inc, rad, bench.power_w, bench.noise_w);
    MemoryPool pool;
    const StepResult res = optimize_step(ctx, bench.params, pool, 5, 1, 1);
    const ThroughputReport first = evaluate_cost(res.first_iteration_best, ctx);
    CHECK(res.report.worst >= first.worst);
}

TEST_CASE("ris_only drops the wall contribution") {
    const MiniBench bench(2);
    const RunResult ris_only = run(Variant::ris_only, bench.scene, bench.table, bench.traj, bench.power_w,
                                   bench.noise_w, bench.params, 3);
    CHECK(ris_only.per_step.size() == 2);
    for (const StepRecord& rec : ris_only.per_step) CHECK(rec.iterations > 0);
}
