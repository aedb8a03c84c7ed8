// SPDX-License-Identifier: Apache-2.0

#include "helpers.hpp"
#include "risc/scene.hpp"

#include <doctest.h>

#include <set>

using namespace risc;

TEST_CASE("full-scale scene matches the benchmark layout") {
    SceneConfig cfg; // defaults are the benchmark values
    const SceneGeometry g = build_scene(cfg);
    CHECK(g.num_elements() == 900);
    CHECK(g.num_ris_patches() == 2025);
    CHECK(g.num_wall_patches() > 0);
    // direct evaluation of 2 pi f0 / c0 (73.3 rad/m at 3.5 GHz)
    CHECK(g.k0 == doctest::Approx(2.0 * constants::pi * 3.5e9 / constants::c0).epsilon(1e-12));
    CHECK(g.k0 == doctest::Approx(73.35).epsilon(1e-3));
    // wavenumber identity to relative 1e-12
    CHECK(std::abs(g.k0 - 2.0 * constants::pi * g.f0 / constants::c0) <= 1e-12 * g.k0);
    CHECK(std::abs(g.eta0 - 376.7303) < 1e-3);
}

TEST_CASE("patch tiling is exact and centers stay inside the wall") {
    const SceneGeometry g = build_scene(testing::desk_config());
    const double ris_area = g.ris_width * g.ris_height;
    CHECK(std::abs(g.ris.area.sum() - ris_area) <= 1e-9 * ris_area);

    const SceneConfig cfg = testing::desk_config();
    for (Eigen::Index p = 0; p < g.ris.count(); ++p) {
        const Vec3 c = g.ris.centers.col(p);
        CHECK(std::abs(c.x() - cfg.wall_center.x()) <= cfg.wall_width_m / 2);
        CHECK(std::abs(c.z() - cfg.wall_center.z()) <= cfg.wall_height_m / 2);
        CHECK(c.y() == cfg.wall_center.y());
    }
    // wall cells never overlap the aperture and their area never exceeds a cell
    const double pitch = g.ris.side[0];
    for (Eigen::Index q = 0; q < g.wall.count(); ++q) {
        const Vec3 c = g.wall.centers.col(q);
        const bool inside_ris = std::abs(c.x() - cfg.wall_center.x()) < g.ris_width / 2 &&
                                std::abs(c.z() - cfg.wall_center.z()) < g.ris_height / 2;
        CHECK_FALSE(inside_ris);
        CHECK(g.wall.area[q] <= pitch * pitch + 1e-12);
        CHECK(g.wall.area[q] > 0.0);
    }
}

TEST_CASE("unit vectors and frame orthogonality") {
    const SceneGeometry g = build_scene(testing::desk_config());
    CHECK(std::abs(g.polarization.norm() - 1.0) <= 1e-12);
    CHECK(std::abs(g.normal.norm() - 1.0) <= 1e-12);
    CHECK(std::abs(g.tangent1.norm() - 1.0) <= 1e-12);
    CHECK(std::abs(g.polarization.dot(g.normal)) <= 1e-12);
    CHECK((g.tangent1.cross(g.tangent2) - g.normal).norm() <= 1e-12);
}

TEST_CASE("square grids are reflection-symmetric about the center") {
    const SceneGeometry g = build_scene(testing::desk_config());
    const Vec3 center = Vec3(0.0, 0.0, 5.0);
    std::set<std::pair<long, long>> centers;
    auto key = [&](const Vec3& c) {
        return std::make_pair(std::lround((c.x() - center.x()) * 1e9), std::lround((c.z() - center.z()) * 1e9));
    };
    for (Eigen::Index p = 0; p < g.ris.count(); ++p) centers.insert(key(g.ris.centers.col(p)));
    for (Eigen::Index p = 0; p < g.ris.count(); ++p) {
        const Vec3 c = g.ris.centers.col(p);
        CHECK(centers.count(key(Vec3(2 * center.x() - c.x(), c.y(), c.z()))) == 1);
        CHECK(centers.count(key(Vec3(c.x(), c.y(), 2 * center.z() - c.z()))) == 1);
    }
}

TEST_CASE("identical configuration gives a bit-identical scene") {
    const SceneGeometry a = build_scene(testing::desk_config());
    const SceneGeometry b = build_scene(testing::desk_config());
    CHECK(a.bs_elements == b.bs_elements);
    CHECK(a.ris.centers == b.ris.centers);
    CHECK(a.wall.centers == b.wall.centers);
    CHECK(a.wall.area == b.wall.area);
    CHECK(a.k0 == b.k0);
}

TEST_CASE("invalid configurations are rejected") {
    SceneConfig cfg = testing::desk_config();
    cfg.ris_side_m = 2.0;
    cfg.wall_width_m = 1.0;
    cfg.wall_height_m = 1.0;
    CHECK_THROWS_AS(build_scene(cfg), std::invalid_argument);

    cfg = testing::desk_config();
    cfg.ris_side_m = -1.0;
    CHECK_THROWS_AS(build_scene(cfg), std::invalid_argument);

    cfg = testing::desk_config();
    cfg.bs_rows = 0;
    CHECK_THROWS_AS(build_scene(cfg), std::invalid_argument);

    cfg = testing::desk_config();
    cfg.f0_hz = 0.0;
    CHECK_THROWS_AS(build_scene(cfg), std::invalid_argument);

    cfg = testing::desk_config();
    cfg.polarization = Vec3(0.0, 1.0, 0.0); // parallel to the wall normal
    CHECK_THROWS_AS(build_scene(cfg), std::invalid_argument);
}

TEST_CASE("relabel and wall removal reshape the patch sets") {
    const SceneGeometry g = build_scene(testing::desk_config());
    const SceneGeometry as_wall = relabel_ris_as_wall(g);
    CHECK(as_wall.num_ris_patches() == 0);
    CHECK(as_wall.num_wall_patches() == g.num_patches());
    CHECK(std::abs(as_wall.wall.area.sum() - (g.wall.area.sum() + g.ris.area.sum())) < 1e-12);

    const SceneGeometry bare = remove_wall(g);
    CHECK(bare.num_wall_patches() == 0);
    CHECK(bare.num_ris_patches() == g.num_ris_patches());
}

TEST_CASE("snapshot validation") {
    const SceneGeometry g = build_scene(testing::desk_config());
    UserSnapshot snap;
    snap.step = 1;
    snap.positions.resize(3, 2);
    snap.positions.col(0) = Vec3(0.0, 40.0, g.user_height);
    snap.positions.col(1) = Vec3(5.0, 50.0, g.user_height);
    CHECK(check_snapshot(g, snap).empty());

    snap.positions.col(1) = Vec3(500.0, 50.0, g.user_height);
    CHECK_FALSE(check_snapshot(g, snap).empty());

    snap.positions.col(1) = Vec3(0.0, 40.0 + g.min_user_separation / 2, g.user_height);
    CHECK_FALSE(check_snapshot(g, snap).empty());
}
