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
#include "sarsub/imaging.hpp"
#include "sarsub/types.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sarsub {

/// Smallest offset d > 0 with profile(d) = peak_value / 2.
///
/// `profile(d)` is the image at distance d from the peak along one axis. It is
/// sampled at multiples of `step` up to `window`; the first bracket of the
/// half level is refined by bisection to relative tolerance `rel_tol`.
/// Throws WindowError when no crossing is found.
double measure_half_width(const std::function<double(double)> &profile, double peak_value, double step,
                          double window, double rel_tol = 1e-4);

/// Same on a sampled profile (offsets strictly increasing, offsets[peak] = 0),
/// with linear interpolation between samples.
double measure_half_width(std::span<const double> offsets, std::span<const double> values, double peak_value);

enum class Axis { cross_range, range };

const char *to_string(Axis axis) noexcept;

struct ResolutionMeasurement {
    Axis axis = Axis::cross_range;
    double half_width = 0.0;     // on the positive side of the peak
    double half_width_neg = 0.0; // on the negative side
    double full_width = 0.0;     // distance between the two half-level crossings
    Vec2 peak_location = Vec2::Zero();
    double peak_value = 0.0;
};

/// Half-level crossings of a 2-D image along `axis` through `peak`.
///
/// `expected_width` sets the search: samples every expected/50, window 20x expected.
ResolutionMeasurement measure_resolution(const std::function<double(const Vec3 &)> &image, const Vec2 &peak,
                                         Axis axis, double expected_width);

/// Predicted full width of 1/F_eps in cross-range:
/// sqrt(eps) (c/B) (L/a) (6/pi) sqrt((M-1)/(M+1)) sqrt((N-1)/(N+1)).
double cross_range_width_theory(const AcquisitionGeometry &geom, double epsilon);

/// Predicted full width of 1/F_eps in range: (sqrt(3)/pi) sqrt(eps) (c/B) (L/R).
/// Infinite when R = 0.
double range_width_theory(const AcquisitionGeometry &geom, double epsilon);

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
};

/// Least-squares line through (log x, log y). Needs >= 3 positive points.
LineFit loglog_fit(std::span<const double> xs, std::span<const double> ys);

/// |rho - rho_hat| / |rho|.
double reflectivity_error(Complex rho_hat, Complex rho);

struct StabilityReport {
    std::string functional;
    int num_realizations = 0;
    GridSpec window;
    double image_snr = 0.0; // +inf when every window point has zero spread
    std::vector<double> pointwise_snr;
    std::vector<double> peak_values; // per realization, value nearest the window center
};

/// Image SNR: per window point, |mean| / std across realizations (divisor
/// n-1), then averaged over the window. Each realization holds the window
/// values in row-major order. Complex values use the complex mean and the
/// root-mean-square deviation.
StabilityReport image_snr(std::span<const std::vector<Complex>> realizations, const GridSpec &window,
                          const std::string &functional);

struct Peak {
    Vec3 location = Vec3::Zero();
    double value = 0.0;
    std::size_t index = 0;
};

/// Argmax of the display value; ties go to the lowest row-major index.
Peak find_peak(const ImageGrid &image);

/// Nodes whose display value is >= every 8-neighbour and > at least one of them.
std::vector<std::size_t> local_maxima(const ImageGrid &image);

/// Number of `targets` that have a local maximum within `cells` grid cells
/// (Chebyshev distance in index units).
int targets_with_local_maximum(const ImageGrid &image, std::span<const Vec3> targets, int cells = 1);

} // namespace sarsub
