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

#include "risc/qos.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace risc {

bool cost_less(const ThroughputReport& a, const ThroughputReport& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (std::isinf(a.cost)) return a.total > b.total;
    return false;
}

ThroughputReport throughput(const CMatrix& fields, double power_w, double noise_w) {
    const Eigen::Index users = fields.rows();
    if (fields.cols() != users) throw std::invalid_argument("throughput: expected one beam per user");
    if (!fields.allFinite()) throw std::invalid_argument("throughput: non-finite field entry");
    if (!(power_w > 0.0) || noise_w < 0.0) throw std::invalid_argument("throughput: bad power values");

    const double noise_term = static_cast<double>(users) * noise_w / power_w;
    ThroughputReport rep;
    rep.per_user.resize(users);
    for (Eigen::Index l = 0; l < users; ++l) {
        double interference = 0.0;
        for (Eigen::Index b = 0; b < users; ++b)
            if (b != l) interference += std::norm(fields(l, b));
        const double signal = std::norm(fields(l, l));
        rep.per_user[l] = std::log2(1.0 + signal / (interference + noise_term));
    }
    rep.worst = rep.per_user.minCoeff();
    rep.total = rep.per_user.sum();
    rep.cost = rep.worst > 0.0 ? 1.0 / rep.worst : std::numeric_limits<double>::infinity();
    return rep;
}

EvalContext make_context(const SceneGeometry& scene, const SusceptibilityTable& table, const IncidenceMatrix& inc,
                         const RadiationMatrix& rad, double power_w, double noise_w, SurfaceMode mode,
                         double zf_rtol) {
    const Eigen::Index p = scene.ris.count();
    const Eigen::Index q = scene.wall.count();
    const Eigen::Index n = p + q;
    if (inc.H1.rows() != n || rad.H2.cols() != n)
        throw std::invalid_argument("context: matrix shapes do not match the scene");
    if (scene.num_elements() < rad.H2.rows())
        throw std::invalid_argument("context: fewer base-station elements than users");

    EvalContext ctx;
    ctx.scene = &scene;
    ctx.table = &table;
    ctx.mode = mode;
    ctx.num_ris = p;
    ctx.power_w = power_w;
    ctx.noise_w = noise_w;
    ctx.zf_rtol = zf_rtol;

    const CMatrix rad_e = rad.obs_e.asDiagonal() * rad.H2;
    const CMatrix rad_h = rad.obs_h.asDiagonal() * rad.H2;
    ctx.ris_rad_e = rad_e.leftCols(p);
    ctx.ris_rad_h = rad_h.leftCols(p);
    // folding the field-averaging factor into the incidence blocks keeps the
    // per-candidate path a plain scale-and-multiply
    ctx.ris_h1 = scene.averaging_factor * inc.H1.topRows(p);
    ctx.ris_h1h = scene.averaging_factor * inc.H1h.topRows(p);

    ctx.wall_channel =
        scene.averaging_factor * (rad_e.rightCols(q) * (table.wall.Ke[1] * inc.H1.bottomRows(q)) +
                                  rad_h.rightCols(q) * (table.wall.Kh[0] * inc.H1h.bottomRows(q)));
    if (mode == SurfaceMode::ris_as_wall && p > 0) {
        ctx.wall_channel += ctx.ris_rad_e * (table.wall.Ke[1] * ctx.ris_h1) +
                            ctx.ris_rad_h * (table.wall.Kh[0] * ctx.ris_h1h);
    }
    return ctx;
}

CMatrix context_channel(const EvalContext& ctx, const RisConfiguration& s) {
    if (s.size() != ctx.num_ris) throw std::invalid_argument("context: configuration length mismatch");
    CMatrix ups = ctx.wall_channel;
    if (ctx.mode == SurfaceMode::normal && ctx.num_ris > 0) {
        CVector d_e(ctx.num_ris);
        CVector d_h(ctx.num_ris);
        const int num_states = ctx.table->num_states();
        for (Eigen::Index i = 0; i < ctx.num_ris; ++i) {
            if (s[i] < 1 || s[i] > num_states) throw std::out_of_range("context: meta-atom state outside the table");
            const SusceptibilityEntry& entry = ctx.table->states[static_cast<std::size_t>(s[i] - 1)];
            d_e[i] = entry.Ke[1];
            d_h[i] = entry.Kh[0];
        }
        ups += ctx.ris_rad_e * (d_e.asDiagonal() * ctx.ris_h1) + ctx.ris_rad_h * (d_h.asDiagonal() * ctx.ris_h1h);
    }
    return ups;
}

ThroughputReport evaluate_cost(const RisConfiguration& s, const EvalContext& ctx) {
    const CMatrix ups = context_channel(ctx, s);
    const BeamWeights w = zf_weights(ups, ctx.power_w, ctx.zf_rtol);
    ThroughputReport rep = throughput(far_fields(ups, w.A), ctx.power_w, ctx.noise_w);
    rep.zf_degenerate = w.degenerate;
    return rep;
}

} // namespace risc
