// SPDX-License-Identifier: Apache-2.0
//
// sarsub: quantitative signal-subspace SAR imaging toolkit
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

// Shared fixtures for the unit and acceptance suites.

#pragma once

#include "sarsub/forward.hpp"
#include "sarsub/geometry.hpp"
#include "sarsub/imaging.hpp"
#include "sarsub/prony.hpp"
#include "sarsub/subspace.hpp"

#include <vector>

namespace sarsub::testing {

// GOTCHA-like default acquisition.
inline AcquisitionGeometry default_geometry()
{
    return AcquisitionGeometry::build(AcquisitionConfig{});
}

inline AcquisitionGeometry small_geometry(int M = 6, int N = 5)
{
    AcquisitionConfig cfg;
    cfg.num_freq_M = M;
    cfg.num_positions_N = N;
    return AcquisitionGeometry::build(cfg);
}

inline Scene single_target(double x = 1.0, double y = 1.0, Complex rho = {0.0, 3.4})
{
    return {PointTarget{Vec3(x, y, 0.0), rho}};
}

inline Scene three_targets()
{
    return {PointTarget{Vec3(0.01, 0.1, 0.0), {0.0, 3.4}}, PointTarget{Vec3(-0.30, -0.50, 0.0), {0.0, 4.2}},
            PointTarget{Vec3(-0.50, 0.50, 0.0), {0.0, 3.1}}};
}

struct Decomposition {
    BlockSVD svd;
    RegularizedSpectrum spectrum;
};

inline Decomposition decompose(const DataCube &cube, double epsilon, double tau_gap = kDefaultTauGap)
{
    Decomposition d;
    d.svd = block_svd(assemble_blocks(cube));
    d.spectrum = regularize_spectrum(d.svd, epsilon, tau_gap);
    return d;
}

inline double relative(Complex a, Complex b)
{
    return std::abs(a - b) / std::abs(b);
}

} // namespace sarsub::testing
