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

#include "sarsub/geometry.hpp"
#include "sarsub/types.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace sarsub {

struct PointTarget {
    Vec3 position = Vec3::Zero();
    Complex reflectivity{1.0, 0.0};
};

using Scene = std::vector<PointTarget>;

/// Stable textual digest of a scene (positions and reflectivities).
std::string scene_hash(std::span<const PointTarget> scene);

enum class PerturbationModel { none, direct, random_medium };

const char *to_string(PerturbationModel model) noexcept;

/// Travel-time offsets nu, seconds, indexed by (target, position).
///
/// A single row applies to every target; this is how the direct model, whose
/// offsets depend on the position only, is stored.
struct TravelTimePerturbation {
    PerturbationModel model = PerturbationModel::none;
    Eigen::MatrixXd offsets; // rows: targets (or 1), cols: positions

    static TravelTimePerturbation none() { return {}; }

    double offset(std::size_t target, std::size_t position) const
    {
        if (model == PerturbationModel::none || offsets.size() == 0)
            return 0.0;
        const auto row = offsets.rows() == 1 ? Eigen::Index{0} : static_cast<Eigen::Index>(target);
        return offsets(row, static_cast<Eigen::Index>(position));
    }
};

struct CubeProvenance {
    std::string scene_hash;
    std::string perturbation_model = "none";
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t noise_seed = 0;
    std::uint64_t medium_seed = 0;
};

/// Measurements d_n(w_m): rows are the 2M-1 frequencies, columns the N positions.
struct DataCube {
    Eigen::MatrixXcd values;
    AcquisitionGeometry geometry;
    CubeProvenance provenance;
};

/// Born-approximation data for non-interacting point targets.
///
/// d_n(w_m) = sum_p rho_p exp(i w_m (2|x_n - y_p|/c + 2 nu_pn)) / (4 pi |x_n - y_p|)^2.
/// The factor two on nu is the round trip through the perturbed Green's function.
DataCube simulate_born(std::span<const PointTarget> scene, const AcquisitionGeometry &geom,
                       const TravelTimePerturbation &perturbation = TravelTimePerturbation::none());

inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

/// How a dB figure relates the Frobenius norms of signal and noise.
enum class NoiseConvention {
    amplitude, // snr_db = 10 log10(|signal|_F / |noise|_F)
    power,     // snr_db = 10 log10(|signal|_F^2 / |noise|_F^2)
};

/// Adds white circular complex Gaussian noise scaled so that the realized
/// Frobenius-norm SNR equals `snr_db` exactly under `convention`.
/// `snr_db = +inf` returns the cube unchanged.
DataCube add_noise(const DataCube &cube, double snr_db, std::uint64_t seed,
                   NoiseConvention convention = NoiseConvention::amplitude);

/// Independent zero-mean Gaussian offsets, one per position, std `sigmas[n]`.
TravelTimePerturbation sample_direct_perturbations(std::span<const double> sigmas, std::uint64_t seed);

} // namespace sarsub
