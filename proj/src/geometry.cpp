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

#include "sarsub/geometry.hpp"

#include "sarsub/errors.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace sarsub {

namespace {

void require_positive(double value, const char *key)
{
    if (!(value > 0.0) || !std::isfinite(value))
        throw ConfigError(key, "must be a positive finite number");
}

void require_nonnegative(double value, const char *key)
{
    if (!(value >= 0.0) || !std::isfinite(value))
        throw ConfigError(key, "must be a non-negative finite number");
}

} // namespace

AcquisitionGeometry AcquisitionGeometry::build(const AcquisitionConfig &config)
{
    require_positive(config.wave_speed_c, "wave_speed_c");
    require_positive(config.center_frequency_f0, "center_frequency_f0");
    require_positive(config.bandwidth_B, "bandwidth_B");
    require_positive(config.aperture_a, "aperture_a");
    // H = 0 is the flat geometry; R = 0 puts the track directly overhead.
    require_nonnegative(config.range_offset_R, "range_offset_R");
    require_nonnegative(config.height_H, "height_H");
    if (config.num_freq_M < 2)
        throw ConfigError("num_freq_M", "must be at least 2");
    if (config.num_positions_N < 2)
        throw ConfigError("num_positions_N", "must be at least 2");

    AcquisitionGeometry geom;
    geom.config_ = config;
    geom.distance_L_ = std::hypot(config.range_offset_R, config.height_H);
    if (!(geom.distance_L_ > 0.0))
        throw ConfigError("range_offset_R", "range offset and height cannot both be zero");

    const int M = config.num_freq_M;
    const double B = config.bandwidth_B;
    geom.delta_omega_ = 2.0 * kPi * B / (M - 1);
    const double omega_first = 2.0 * kPi * config.center_frequency_f0 - kPi * B;
    if (!(omega_first > 0.0))
        throw ConfigError("bandwidth_B", "lowest frequency f0 - B/2 must be positive");

    geom.frequencies_.resize(static_cast<std::size_t>(2 * M - 1));
    for (int m = 0; m < 2 * M - 1; ++m)
        geom.frequencies_[static_cast<std::size_t>(m)] = omega_first + m * geom.delta_omega_;

    const int N = config.num_positions_N;
    const double a = config.aperture_a;
    geom.positions_.reserve(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        // Symmetric form keeps x_n + x_{N-1-n} == 0 exactly.
        const double x = a * (2.0 * n - (N - 1)) / (2.0 * (N - 1));
        geom.positions_.emplace_back(x, config.range_offset_R, config.height_H);
    }
    return geom;
}

std::string AcquisitionGeometry::hash() const
{
    std::ostringstream os;
    os.precision(17);
    os << config_.wave_speed_c << ',' << config_.center_frequency_f0 << ',' << config_.bandwidth_B << ','
       << config_.num_freq_M << ',' << config_.num_positions_N << ',' << config_.aperture_a << ','
       << config_.range_offset_R << ',' << config_.height_H;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016zx", std::hash<std::string>{}(os.str()));
    return buf;
}

void GridSpec::validate() const
{
    if (nx < 1 || ny < 1)
        throw ConfigError("grid.resolution", "must be positive integers");
    if (!(extent.x() > 0.0) || !(extent.y() > 0.0) || !extent.allFinite())
        throw ConfigError("grid.extent", "must be positive");
    if (!center.allFinite())
        throw ConfigError("grid.center", "must be finite");
}

Vec3 GridSpec::point(int ix, int iy) const
{
    // Offsets are taken from the middle so an odd grid has its center as an exact node.
    const double x = center.x() + (ix - 0.5 * (nx - 1)) * spacing_x();
    const double y = center.y() + (iy - 0.5 * (ny - 1)) * spacing_y();
    return {x, y, 0.0};
}

std::vector<Vec3> grid_points(const GridSpec &spec)
{
    spec.validate();
    std::vector<Vec3> points;
    points.reserve(spec.size());
    for (int iy = 0; iy < spec.ny; ++iy)
        for (int ix = 0; ix < spec.nx; ++ix)
            points.push_back(spec.point(ix, iy));
    return points;
}

} // namespace sarsub
