// SPDX-License-Identifier: Apache-2.0

#include "risc/config.hpp"

#include <doctest.h>

using namespace risc;
using doctest::Approx;

TEST_CASE("empty sections fall back to the standard parameter set") {
    const RunConfig cfg = parse_config_text("{}");
    CHECK(cfg.ga.sigma_max == 1.0);
    CHECK(cfg.ga.rho_min == 0.02);
    CHECK(cfg.ga.rho_max == 0.06);
    CHECK(cfg.ga.psi_min == 0.60);
    CHECK(cfg.ga.psi_max == 0.95);
    CHECK(cfg.ga.window == 3);
    CHECK(cfg.ga.nu_max == 0.2);
    CHECK(cfg.ga.beta_max == 0.2);
    CHECK(cfg.ga.kappa_max == 0.2);
    CHECK(cfg.ga.max_iterations == 100);
    CHECK(cfg.ga.population == 100);
    CHECK(cfg.power_dbm == 46.0);
    CHECK(cfg.noise_dbm == -96.0);
    CHECK(cfg.scene.f0_hz == 3.5e9);
}

TEST_CASE("dBm fields are converted to watts once at parse") {
    const RunConfig cfg = parse_config_text(R"({"scene": {"power_dbm": 46, "noise_dbm": -96}})");
    CHECK(cfg.power_w == Approx(39.81).epsilon(1e-3));
    CHECK(cfg.power_w == Approx(std::pow(10.0, 1.6)).epsilon(1e-12));
    CHECK(cfg.noise_w == Approx(std::pow(10.0, -12.6)).epsilon(1e-12));
}

TEST_CASE("unknown keys are fatal and name the key") {
    try {
        parse_config_text(R"({"scenario": {"foo": 1}})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("foo") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text(R"({"bogus_section": {}})"), ConfigError);
}

TEST_CASE("syntax errors report the line number") {
    try {
        parse_config_text("{\n  \"scene\": {\n  oops\n}\n}");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("invariant violations carry the field path") {
    try {
        parse_config_text(R"({"ga": {"rho_min": 0.5, "rho_max": 0.1}})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("ga") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text(R"({"scene": {"f0_hz": -1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"table": {"bits": 12}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"table": {"amplitude": 1.5}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"scenario": {"kind": "strange"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"scenario": {"kind": "periodic", "period": 200, "steps": 100}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"ga": {"polarity": "sideways"}})"), ConfigError);
    // ZF feasibility cross-check: M >= L
    CHECK_THROWS_AS(parse_config_text(R"({"scene": {"bs_rows": 1, "bs_cols": 2}, "scenario": {"users": 3}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(" /nonexistent/config.json"), ConfigError);
}

TEST_CASE("forward-model options parse with validation") {
    const RunConfig a = parse_config_text(R"({"scene": {"averaging": "incident"}})");
    CHECK(a.scene.averaging_factor == 1.0);
    const RunConfig b = parse_config_text(R"({"scene": {"averaging": {"two_sided": 0.8}, "quadrature": 2,
                                                        "zf_rtol": 1e-8}})");
    CHECK(b.scene.averaging_factor == 0.8);
    CHECK(b.scene.quadrature_points == 2);
    CHECK(b.zf_rtol == 1e-8);
    CHECK_THROWS_AS(parse_config_text(R"({"scene": {"averaging": "sideways"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"scene": {"quadrature": 5}})"), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"scene": {"zf_rtol": 2.0}})"), ConfigError);
}

TEST_CASE("scenario and outputs sections parse") {
    const RunConfig cfg = parse_config_text(R"({
        "scene": {"user_area": [-10, 10, 20, 40], "user_height_m": 1.0},
        "table": {"bits": 2, "amplitude": 0.9},
        "scenario": {"kind": "periodic", "users": 2, "steps": 20, "period": 5, "v_max": 2.0},
        "outputs": {"footprint_grid": [12, 8], "footprint_steps": [1, 2], "footprint_beams": [1, 2]}
    })");
    CHECK(cfg.kind == TrajectoryKind::periodic);
    CHECK(cfg.period == 5);
    CHECK(cfg.table_bits == 2);
    CHECK(cfg.mobility.v_max == 2.0);
    CHECK(cfg.mobility.user_height == 1.0); // propagated from the scene section
    CHECK(cfg.footprint_nx == 12);
    CHECK(cfg.footprint_steps == std::vector<int>{1, 2});
    CHECK(cfg.scene.user_area.x_min == -10.0);
}
