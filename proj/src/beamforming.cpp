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

#include "risc/beamforming.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace risc {

CMatrix pseudo_inverse(const CMatrix& m, double rtol) {
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? rtol * sv[0] : 0.0;
    RVector inv = RVector::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > cutoff && sv[i] > 0.0) inv[i] = 1.0 / sv[i];
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

BeamWeights zf_weights(const CMatrix& cascaded, double total_power_w, double rtol) {
    const Eigen::Index users = cascaded.rows();
    const Eigen::Index elements = cascaded.cols();
    if (elements < users) throw std::invalid_argument("zf: more users than base-station elements");
    if (!(total_power_w > 0.0)) throw std::invalid_argument("zf: total power must be positive");

    Eigen::JacobiSVD<CMatrix> svd(cascaded, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& sv = svd.singularValues();
    const double cutoff = sv.size() > 0 ? rtol * sv[0] : 0.0;
    Eigen::Index rank = 0;
    RVector inv = RVector::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] > cutoff && sv[i] > 0.0) {
            inv[i] = 1.0 / sv[i];
            ++rank;
        }
    }

    BeamWeights w;
    w.A = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
    w.total_power = total_power_w;
    w.degenerate = rank < users;

    const double per_beam = std::sqrt(total_power_w / static_cast<double>(users));
    for (Eigen::Index b = 0; b < w.A.cols(); ++b) {
        const double norm = w.A.col(b).norm();
        if (norm > 0.0) w.A.col(b) *= per_beam / norm;
    }
    return w;
}

} // namespace risc
