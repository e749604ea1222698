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

#include "sarsub/types.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace sarsub {

// Scalar description of a linear-flight-path acquisition. SI units.
struct AcquisitionConfig {
    double wave_speed_c = 3.0e8;
    double center_frequency_f0 = 9.6e9;
    double bandwidth_B = 622.0e6;
    int num_freq_M = 20;
    int num_positions_N = 32;
    double aperture_a = 130.0;
    double range_offset_R = 3550.0;
    double height_H = 7300.0;
};

/// Acquisition geometry with platform positions and the frequency grid.
///
/// Platform positions are x_n = (-a/2 + a n/(N-1), R, H) for n = 0..N-1 and the
/// 2M-1 angular frequencies are w_m = 2 pi f0 - pi B + m dw, dw = 2 pi B/(M-1),
/// so the first M frequencies span exactly B centered at f0. Range is the y
/// axis, cross-range the x axis and the scene lies on z = 0.
///
/// Immutable after construction.
class AcquisitionGeometry {
public:
    /// Throws ConfigError naming the field on invalid input.
    static AcquisitionGeometry build(const AcquisitionConfig &config);

    const AcquisitionConfig &config() const noexcept { return config_; }

    double wave_speed() const noexcept { return config_.wave_speed_c; }
    double center_frequency() const noexcept { return config_.center_frequency_f0; }
    double bandwidth() const noexcept { return config_.bandwidth_B; }
    int num_freq_M() const noexcept { return config_.num_freq_M; }
    int num_frequencies() const noexcept { return 2 * config_.num_freq_M - 1; }
    int num_positions() const noexcept { return config_.num_positions_N; }
    double aperture() const noexcept { return config_.aperture_a; }
    double range_offset() const noexcept { return config_.range_offset_R; }
    double height() const noexcept { return config_.height_H; }

    double distance_L() const noexcept { return distance_L_; }
    // sin(theta) = R/L, cos(theta) = H/L
    double sin_theta() const noexcept { return config_.range_offset_R / distance_L_; }
    double cos_theta() const noexcept { return config_.height_H / distance_L_; }
    double wavelength() const noexcept { return config_.wave_speed_c / config_.center_frequency_f0; }
    double k0() const noexcept { return 2.0 * kPi / wavelength(); }
    double delta_omega() const noexcept { return delta_omega_; }

    std::span<const Vec3> positions() const noexcept { return positions_; }
    const Vec3 &position(int n) const { return positions_.at(static_cast<std::size_t>(n)); }

    /// All 2M-1 angular frequencies, rad/s.
    std::span<const double> frequencies() const noexcept { return frequencies_; }

    /// Stable textual digest of the configuration.
    std::string hash() const;

private:
    AcquisitionConfig config_;
    double distance_L_ = 0.0;
    double delta_omega_ = 0.0;
    std::vector<Vec3> positions_;
    std::vector<double> frequencies_;
};

// Rectangular search region on the z = 0 plane.
/// Unit phasors exp(i w_m t) over the frequency grid. The start phase and the
/// per-step increment are reduced modulo 2 pi once, so the sequence stays
/// geometric to rounding even when w_m t is of order 1e6 rad.
class PhaseRamp {
public:
    PhaseRamp(const AcquisitionGeometry &geom, double t)
        : base_(std::remainder(geom.frequencies().front() * t, 2.0 * kPi)),
          step_(std::remainder(geom.delta_omega() * t, 2.0 * kPi))
    {
    }

    Complex operator()(int m, double scale = 1.0) const { return std::polar(scale, base_ + m * step_); }

private:
    double base_;
    double step_;
};

struct GridSpec {
    Vec2 center = Vec2::Zero();
    Vec2 extent = Vec2::Ones();
    int nx = 1;
    int ny = 1;

    void validate() const;
    std::size_t size() const noexcept { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
    double spacing_x() const noexcept { return nx > 1 ? extent.x() / (nx - 1) : 0.0; }
    double spacing_y() const noexcept { return ny > 1 ? extent.y() / (ny - 1) : 0.0; }
    Vec3 point(int ix, int iy) const;
};

/// Row-major grid nodes (x fastest) with corners at center +- extent/2.
std::vector<Vec3> grid_points(const GridSpec &spec);

} // namespace sarsub
