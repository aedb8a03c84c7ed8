// SPDX-License-Identifier: Apache-2.0

#include "risc/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace risc;
namespace fs = std::filesystem;

namespace {

// Tiny instance: 2x2 array, 2x2 meta-atoms (1 bit), two users, three steps.
const char* kMiniConfig = R"({
    "scene": {
        "bs_rows": 2, "bs_cols": 2,
        "ris_rows": 2, "ris_cols": 2, "ris_side_m": 0.0857,
        "wall_width_m": 0.18, "wall_height_m": 0.18,
        "user_area": [-20, 20, 20, 60]
    },
    "table": {"bits": 1, "amplitude": 1.0},
    "ga": {"population": 10, "max_iterations": 8, "memory_capacity": 5},
    "scenario": {"kind": "periodic", "users": 2, "steps": 4, "period": 2},
    "outputs": {"footprint_grid": [6, 5], "footprint_steps": [1], "footprint_beams": [1]}
})";

struct TempTree {
    fs::path root;
    TempTree() {
        root = fs::temp_directory_path() / fs::path("risc_cli_" + std::to_string(::getpid()) + "_" +
                                                    std::to_string(counter()));
        fs::create_directories(root);
    }
    ~TempTree() { fs::remove_all(root); }
    static int counter() {
        static int n = 0;
        return n++;
    }
    std::string config(const char* text = kMiniConfig) const {
        const fs::path p = root / "config.json";
        std::ofstream out(p);
        out << text;
        return p.string();
    }
    std::string out(const std::string& name) const { return (root / name).string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("compare writes the side-by-side results and traces") {
    TempTree tmp;
    const int rc = cli_main({"compare", "--config", tmp.config(), "--seed", "7", "--out", tmp.out("cmp"),
                             "--threads", "1", "--no-timestamp"});
    CHECK(rc == 0);
    CHECK(fs::exists(tmp.root / "cmp" / "results.csv"));
    CHECK(fs::exists(tmp.root / "cmp" / "trace_me.csv"));
    CHECK(fs::exists(tmp.root / "cmp" / "trace_ga.csv"));

    const std::string results = slurp(tmp.root / "cmp" / "results.csv");
    CHECK(results.find("step,variant,T_worst,T_1,T_2,cost,iterations,stored,restored,delta_s_mean") !=
          std::string::npos);
    CHECK(results.find("me_risc") != std::string::npos);
    CHECK(results.find("ga_risc") != std::string::npos);
    CHECK(results.find("no_ris") != std::string::npos);

    SUBCASE("reruns are byte-identical with the timestamp suppressed") {
        const int rc2 = cli_main({"compare", "--config", tmp.config(), "--seed", "7", "--out", tmp.out("cmp2"),
                                  "--threads", "2", "--no-timestamp"});
        CHECK(rc2 == 0);
        CHECK(slurp(tmp.root / "cmp" / "results.csv") == slurp(tmp.root / "cmp2" / "results.csv"));
        CHECK(slurp(tmp.root / "cmp" / "trace_me.csv") == slurp(tmp.root / "cmp2" / "trace_me.csv"));
    }

    SUBCASE("the ris_only variant joins when flagged") {
        const int rc3 = cli_main({"compare", "--config", tmp.config(), "--seed", "7", "--out", tmp.out("cmp3"),
                                  "--ris-only", "--no-timestamp"});
        CHECK(rc3 == 0);
        CHECK(fs::exists(tmp.root / "cmp3" / "trace_ris_only.csv"));
        CHECK(slurp(tmp.root / "cmp3" / "results.csv").find("ris_only") != std::string::npos);
    }
}

TEST_CASE("run handles every variant name") {
    TempTree tmp;
    CHECK(cli_main({"run", "--config", tmp.config(), "--variant", "no_ris", "--out", tmp.out("r1"),
                    "--no-timestamp"}) == 0);
    CHECK(fs::exists(tmp.root / "r1" / "results.csv"));
    CHECK(fs::exists(tmp.root / "r1" / "trace_no_ris.csv"));
    CHECK(cli_main({"run", "--config", tmp.config(), "--variant", "bogus", "--out", tmp.out("r2")}) == 1);
}

TEST_CASE("brute-force emits the exhaustive table") {
    TempTree tmp;
    const int rc = cli_main({"brute-force", "--config", tmp.config(), "--out", tmp.out("bf"), "--no-timestamp"});
    CHECK(rc == 0);
    const std::string table = slurp(tmp.root / "bf" / "brute_force.csv");
    CHECK(table.find("index,s_1,s_2,s_3,s_4,T_worst,cost") != std::string::npos);
    int data_rows = 0;
    std::istringstream lines(table);
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty() && line[0] != '#' && line.find("index") != 0) ++data_rows;
    CHECK(data_rows == 16);
}

TEST_CASE("footprint exports the selected grids") {
    TempTree tmp;
    const int rc = cli_main({"footprint", "--config", tmp.config(), "--out", tmp.out("fp"), "--no-timestamp"});
    CHECK(rc == 0);
    const fs::path grid = tmp.root / "fp" / "footprint_me_risc_step1_beam1.csv";
    REQUIRE(fs::exists(grid));
    const std::string text = slurp(grid);
    CHECK(text.find("x,y,power") != std::string::npos);
    int rows = 0;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty() && line[0] != '#' && line[0] != 'x') ++rows;
    CHECK(rows == 6 * 5);
}

TEST_CASE("sweep-noise needs a sweep list and emits one row per level and variant") {
    TempTree tmp;
    CHECK(cli_main({"sweep-noise", "--config", tmp.config(), "--out", tmp.out("s0")}) == 1);

    const std::string sweep_cfg = R"({
        "scene": {
            "bs_rows": 2, "bs_cols": 2,
            "ris_rows": 2, "ris_cols": 2, "ris_side_m": 0.0857,
            "wall_width_m": 0.18, "wall_height_m": 0.18,
            "user_area": [-20, 20, 20, 60],
            "noise_sweep_dbm": [-96, -76, -56]
        },
        "table": {"bits": 1, "amplitude": 1.0},
        "ga": {"population": 8, "max_iterations": 5},
        "scenario": {"kind": "aperiodic", "users": 2, "steps": 2}
    })";
    const fs::path cfg_path = tmp.root / "sweep.json";
    {
        std::ofstream out(cfg_path);
        out << sweep_cfg;
    }
    const int rc = cli_main({"sweep-noise", "--config", cfg_path.string(), "--out", tmp.out("s1"),
                             "--no-timestamp"});
    CHECK(rc == 0);
    const std::string table = slurp(tmp.root / "s1" / "noise_sweep.csv");
    CHECK(table.find("sigma2_dbm,me_risc,ga_risc,no_ris") != std::string::npos);
    int rows = 0;
    std::istringstream lines(table);
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty() && line[0] != '#' && line.find("sigma2") != 0) ++rows;
    CHECK(rows == 3);
}

TEST_CASE("configuration problems exit with code 1") {
    TempTree tmp;
    CHECK(cli_main({"run", "--config", tmp.out("missing.json"), "--out", tmp.out("x")}) == 1);
    const char* broken = R"({"scene": {"nonsense": true}})";
    CHECK(cli_main({"run", "--config", tmp.config(broken), "--out", tmp.out("y")}) == 1);
    CHECK(cli_main({"run"}) == 1);                 // missing --config
    CHECK(cli_main({"unknown-subcommand"}) == 1);  // bad subcommand
}
