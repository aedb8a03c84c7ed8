// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures for the test suites: small scenes and an independently
// coded dense-chain oracle for the forward model and the cost. The oracle
// deliberately uses plain per-entry loops and its own pseudo-inverse call so
// it shares no assembly code with the library implementation.

#ifndef RISC_TESTS_HELPERS_HPP
#define RISC_TESTS_HELPERS_HPP

#include "risc/em_forward.hpp"
#include "risc/qos.hpp"
#include "risc/scene.hpp"
#include "risc/types.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <vector>

namespace risc::testing {

// P = 2x2 (B = 1), M = 2x2, L = 2, no wall ring: the brute-force instance.
inline SceneConfig toy_config() {
    SceneConfig cfg;
    cfg.f0_hz = 3.5e9;
    cfg.bs_rows = cfg.bs_cols = 2;
    cfg.bs_position = Vec3(-20.0, 20.0, 5.0);
    cfg.ris_rows = cfg.ris_cols = 2;
    const double lambda = constants::c0 / cfg.f0_hz;
    cfg.ris_side_m = lambda;
    cfg.wall_width_m = cfg.wall_height_m = lambda;
    cfg.wall_center = Vec3(0.0, 0.0, 5.0);
    cfg.user_area = GroundRect{-20.0, 20.0, 20.0, 60.0};
    return cfg;
}

inline UserSnapshot toy_users() {
    UserSnapshot snap;
    snap.step = 1;
    snap.positions.resize(3, 2);
    snap.positions.col(0) = Vec3(5.0, 30.0, 1.5);
    snap.positions.col(1) = Vec3(-8.0, 45.0, 1.5);
    return snap;
}

// P = 8x8 (B = 3), M = 8x8, L = 2, with a wall ring around the aperture.
inline SceneConfig desk_config() {
    SceneConfig cfg;
    cfg.f0_hz = 3.5e9;
    cfg.bs_rows = cfg.bs_cols = 8;
    cfg.bs_position = Vec3(-20.0, 20.0, 5.0);
    cfg.ris_rows = cfg.ris_cols = 8;
    const double lambda = constants::c0 / cfg.f0_hz;
    cfg.ris_side_m = 8.0 * lambda / 2.0;
    cfg.wall_width_m = cfg.wall_height_m = 0.7;
    cfg.wall_center = Vec3(0.0, 0.0, 5.0);
    cfg.user_area = GroundRect{-40.0, 40.0, 25.0, 80.0};
    return cfg;
}

// Dense-chain oracle: field chain assembled entry by entry from the model
// formulas, without the library's matrix factorization of the sum.
inline CMatrix oracle_channel(const SceneGeometry& scene, const SusceptibilityTable& table, const RisConfiguration& s,
                              const Eigen::Matrix3Xd& users) {
    const Complex j1(0.0, 1.0);
    const double k0 = scene.k0;
    const Eigen::Index p_count = scene.ris.count();
    const Eigen::Index q_count = scene.wall.count();
    const Eigen::Index m_count = scene.num_elements();
    const Eigen::Index l_count = users.cols();

    CMatrix ups = CMatrix::Zero(l_count, m_count);
    for (Eigen::Index l = 0; l < l_count; ++l) {
        const Vec3 rel = users.col(l) - scene.surface_origin;
        const double range = rel.norm();
        const Vec3 rhat = rel / range;
        const Complex pref = j1 * k0 / (4.0 * constants::pi) * std::exp(-j1 * k0 * range) / range;
        const Complex obs_e = -j1 * k0 * rhat.cross(scene.polarization).squaredNorm();
        const Complex obs_h = j1 * k0 * scene.eta0 * rhat.dot(scene.normal);
        for (Eigen::Index i = 0; i < p_count + q_count; ++i) {
            const bool is_ris = i < p_count;
            const Vec3 center = is_ris ? Vec3(scene.ris.centers.col(i)) : Vec3(scene.wall.centers.col(i - p_count));
            const double area = is_ris ? scene.ris.area[i] : scene.wall.area[i - p_count];
            const SusceptibilityEntry& entry =
                is_ris ? table.states.at(static_cast<std::size_t>(s[i] - 1)) : table.wall;
            const Complex kernel = pref * area * std::exp(j1 * k0 * rhat.dot(center - scene.surface_origin));
            for (Eigen::Index m = 0; m < m_count; ++m) {
                const Vec3 delta = center - scene.bs_elements.col(m);
                const double d = delta.norm();
                const Complex g = std::exp(-j1 * k0 * d) / (4.0 * constants::pi * d);
                const Complex h = g * (delta / d).cross(scene.polarization).dot(scene.tangent1) / scene.eta0;
                ups(l, m) += kernel * (obs_e * entry.Ke[1] * g + obs_h * entry.Kh[0] * h);
            }
        }
    }
    return ups;
}

// Cost oracle: own pseudo-inverse, own normalization, own throughput formula.
inline double oracle_cost(const SceneGeometry& scene, const SusceptibilityTable& table, const RisConfiguration& s,
                          const Eigen::Matrix3Xd& users, double power_w, double noise_w, double* worst_out = nullptr) {
    const CMatrix ups = oracle_channel(scene, table, s, users);
    Eigen::JacobiSVD<CMatrix> svd(ups, Eigen::ComputeThinU | Eigen::ComputeThinV);
    RVector inv = RVector::Zero(svd.singularValues().size());
    for (Eigen::Index i = 0; i < inv.size(); ++i)
        if (svd.singularValues()[i] > 1e-10 * svd.singularValues()[0]) inv[i] = 1.0 / svd.singularValues()[i];
    CMatrix weights = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
    const Eigen::Index users_n = ups.rows();
    for (Eigen::Index b = 0; b < weights.cols(); ++b) {
        const double norm = weights.col(b).norm();
        if (norm > 0.0) weights.col(b) *= std::sqrt(power_w / static_cast<double>(users_n)) / norm;
    }
    const CMatrix fields = ups * weights;
    double worst = std::numeric_limits<double>::infinity();
    for (Eigen::Index l = 0; l < users_n; ++l) {
        double interference = 0.0;
        for (Eigen::Index b = 0; b < users_n; ++b)
            if (b != l) interference += std::norm(fields(l, b));
        const double t =
            std::log2(1.0 + std::norm(fields(l, l)) /
                                (interference + static_cast<double>(users_n) * noise_w / power_w));
        worst = std::min(worst, t);
    }
    if (worst_out) *worst_out = worst;
    return worst > 0.0 ? 1.0 / worst : std::numeric_limits<double>::infinity();
}

// Every configuration of the toy instance, enumerated with gene 1 fastest.
inline std::vector<RisConfiguration> enumerate_configurations(Eigen::Index genes, int bits) {
    const std::uint64_t total = 1ULL << (static_cast<unsigned>(bits) * static_cast<unsigned>(genes));
    const std::uint64_t mask = (1ULL << static_cast<unsigned>(bits)) - 1ULL;
    std::vector<RisConfiguration> all(total, RisConfiguration(genes));
    for (std::uint64_t i = 0; i < total; ++i)
        for (Eigen::Index p = 0; p < genes; ++p)
            all[i][p] = static_cast<int>((i >> (static_cast<unsigned>(bits) * static_cast<unsigned>(p))) & mask) + 1;
    return all;
}

} // namespace risc::testing

#endif // RISC_TESTS_HELPERS_HPP
