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

#pragma once

#include "sarsub/config.hpp"
#include "sarsub/random_medium.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace sarsub {

std::string code_version();

/// Medium parameters with defaults resolved against the geometry; sigma_tilde
/// is converted to sigma with sigma0 = lambda / sqrt(ell L).
RandomMediumSpec medium_spec(const ExperimentConfig &config, const AcquisitionGeometry &geom);

/// Domain enclosing every platform-to-target path, padded by the medium margin.
BoundingBox medium_domain(const ExperimentConfig &config, const AcquisitionGeometry &geom);

/// Data of realization `r`: Born cube with the configured perturbation and
/// noise. Noise, medium and direct offsets draw from separate derived seeds.
DataCube synthesize(const ExperimentConfig &config, const AcquisitionGeometry &geom, int realization);

/// Value of `f` at `y`. `svd` and `spectrum` are needed for the subspace
/// functionals; CINT windows default to a/6 and B/2.
Complex functional_value(Functional f, const Vec3 &y, const ExperimentConfig &config, const DataCube &cube,
                         const BlockSVD *svd, const RegularizedSpectrum *spectrum);

ImageGrid functional_image(Functional f, const GridSpec &grid, const ExperimentConfig &config,
                           const DataCube &cube, const BlockSVD *svd, const RegularizedSpectrum *spectrum,
                           int realization, int threads);

struct RunResult {
    std::string config_hash;
    std::vector<std::filesystem::path> files; // relative to the output directory, in write order
};

/// Runs `config` and writes CSV files with JSON sidecars plus the effective
/// config into `out_dir`. Progress lines go to `log` when given.
RunResult run_experiment(const ExperimentConfig &config, const std::filesystem::path &out_dir,
                         std::ostream *log = nullptr);

} // namespace sarsub
