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

#ifndef RISC_BEAMFORMING_HPP
#define RISC_BEAMFORMING_HPP

#include "risc/types.hpp"

namespace risc {

// Zero-forcing excitations. Column b serves user b; after normalization every
// column carries total_power / B watts (unit-efficiency elements).
struct BeamWeights {
    CMatrix A;                 // M x B
    double total_power = 0.0;  // Lambda (W)
    bool degenerate = false;   // channel rank below the user count
};

// Moore-Penrose pseudo-inverse with singular values below rtol * sigma_max
// treated as zero.
CMatrix pseudo_inverse(const CMatrix& m, double rtol = 1e-10);

// ZF weights for an L x M channel (M >= L required): pseudo-inverse columns
// scaled to equal per-beam power. A rank-deficient channel is flagged, not
// rejected; the least-squares weights are still returned.
BeamWeights zf_weights(const CMatrix& cascaded, double total_power_w, double rtol = 1e-10);

} // namespace risc

#endif // RISC_BEAMFORMING_HPP
