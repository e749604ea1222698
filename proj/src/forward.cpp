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

#include "sarsub/forward.hpp"

#include "sarsub/errors.hpp"
#include "sarsub/rng.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace sarsub {

std::string scene_hash(std::span<const PointTarget> scene)
{
    std::ostringstream os;
    os.precision(17);
    for (const auto &t : scene)
        os << t.position.x() << ',' << t.position.y() << ',' << t.position.z() << ',' << t.reflectivity.real()
           << ',' << t.reflectivity.imag() << ';';
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016zx", std::hash<std::string>{}(os.str()));
    return buf;
}

const char *to_string(PerturbationModel model) noexcept
{
    switch (model) {
    case PerturbationModel::none:
        return "none";
    case PerturbationModel::direct:
        return "direct";
    case PerturbationModel::random_medium:
        return "random_medium";
    }
    return "unknown";
}

DataCube simulate_born(std::span<const PointTarget> scene, const AcquisitionGeometry &geom,
                       const TravelTimePerturbation &perturbation)
{
    const int N = geom.num_positions();
    const int F = geom.num_frequencies();
    if (perturbation.model != PerturbationModel::none && perturbation.offsets.size() != 0) {
        const auto rows = perturbation.offsets.rows();
        if (perturbation.offsets.cols() != N || (rows != 1 && rows != static_cast<Eigen::Index>(scene.size())))
            throw DimensionError("travel-time offsets must be (1 or targets) x positions");
        if (!perturbation.offsets.allFinite())
            throw DomainError("travel-time offsets must be finite");
    }

    DataCube cube{Eigen::MatrixXcd::Zero(F, N), geom, {}};
    cube.provenance.scene_hash = scene_hash(scene);
    cube.provenance.perturbation_model = to_string(perturbation.model);

    const double c = geom.wave_speed();
    for (std::size_t p = 0; p < scene.size(); ++p) {
        const auto &target = scene[p];
        for (int n = 0; n < N; ++n) {
            const double r = (geom.position(n) - target.position).norm();
            if (!(r > 0.0))
                throw SingularGeometryError("target " + std::to_string(p) + " coincides with platform position " +
                                            std::to_string(n));
            const double delay = 2.0 * r / c + 2.0 * perturbation.offset(p, static_cast<std::size_t>(n));
            const double spread = 4.0 * kPi * r;
            const Complex amplitude = target.reflectivity / (spread * spread);
            const PhaseRamp phase(geom, delay);
            for (int m = 0; m < F; ++m)
                cube.values(m, n) += amplitude * phase(m);
        }
    }
    return cube;
}

DataCube add_noise(const DataCube &cube, double snr_db, std::uint64_t seed, NoiseConvention convention)
{
    if (std::isinf(snr_db) && snr_db > 0.0)
        return cube;
    if (std::isnan(snr_db))
        throw ConfigError("snr_db", "must not be NaN");

    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXcd noise(cube.values.rows(), cube.values.cols());
    // Column-major fill order is part of the determinism contract.
    for (Eigen::Index j = 0; j < noise.cols(); ++j)
        for (Eigen::Index i = 0; i < noise.rows(); ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            noise(i, j) = Complex(re, im);
        }

    const double signal_norm = cube.values.norm();
    const double noise_norm = noise.norm();
    const double ratio = std::pow(10.0, convention == NoiseConvention::amplitude ? snr_db / 10.0 : snr_db / 20.0);
    const double scale = noise_norm > 0.0 ? signal_norm / (noise_norm * ratio) : 0.0;

    DataCube out = cube;
    out.values += scale * noise;
    out.provenance.snr_db = snr_db;
    out.provenance.noise_seed = seed;
    return out;
}

TravelTimePerturbation sample_direct_perturbations(std::span<const double> sigmas, std::uint64_t seed)
{
    for (std::size_t n = 0; n < sigmas.size(); ++n)
        if (!(sigmas[n] >= 0.0) || !std::isfinite(sigmas[n]))
            throw ConfigError("sigma[" + std::to_string(n) + "]", "travel-time std must be non-negative");

    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    TravelTimePerturbation out;
    out.model = PerturbationModel::direct;
    out.offsets.resize(1, static_cast<Eigen::Index>(sigmas.size()));
    for (std::size_t n = 0; n < sigmas.size(); ++n)
        out.offsets(0, static_cast<Eigen::Index>(n)) = sigmas[n] * normal(rng);
    return out;
}

} // namespace sarsub
