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

#include "sarsub/analysis.hpp"

#include "sarsub/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sarsub {

double measure_half_width(const std::function<double(double)> &profile, double peak_value, double step,
                          double window, double rel_tol)
{
    if (!(step > 0.0) || !(window > step))
        throw ConfigError("half_width.window", "need 0 < step < window");
    const double half = 0.5 * peak_value;
    double lo = 0.0;
    double hi = 0.0;
    bool found = false;
    const auto samples = static_cast<long>(std::ceil(window / step));
    for (long k = 1; k <= samples; ++k) {
        const double d = static_cast<double>(k) * step;
        if (profile(d) <= half) {
            lo = static_cast<double>(k - 1) * step;
            hi = d;
            found = true;
            break;
        }
    }
    if (!found)
        throw WindowError("profile does not fall to half its peak within the search window");
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (profile(mid) <= half)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

double measure_half_width(std::span<const double> offsets, std::span<const double> values, double peak_value)
{
    if (offsets.size() != values.size() || offsets.empty())
        throw DimensionError("profile offsets and values must have equal, non-zero length");
    const double half = 0.5 * peak_value;
    std::size_t start = 0;
    while (start < offsets.size() && offsets[start] < 0.0)
        ++start;
    if (start == offsets.size())
        throw WindowError("profile has no samples at or after the peak");
    for (std::size_t i = start + 1; i < offsets.size(); ++i) {
        if (values[i] <= half) {
            const double v0 = values[i - 1];
            const double v1 = values[i];
            const double t = v0 == v1 ? 1.0 : (v0 - half) / (v0 - v1);
            return offsets[i - 1] + t * (offsets[i] - offsets[i - 1]);
        }
    }
    throw WindowError("profile does not fall to half its peak within the sampled window");
}

const char *to_string(Axis axis) noexcept
{
    return axis == Axis::cross_range ? "cross_range" : "range";
}

ResolutionMeasurement measure_resolution(const std::function<double(const Vec3 &)> &image, const Vec2 &peak,
                                         Axis axis, double expected_width)
{
    if (!(expected_width > 0.0))
        throw ConfigError("expected_width", "must be positive");
    const Vec3 centre(peak.x(), peak.y(), 0.0);
    const Vec3 dir = axis == Axis::cross_range ? Vec3::UnitX() : Vec3::UnitY();
    const double peak_value = image(centre);
    const double step = expected_width / 50.0;
    const double window = 20.0 * expected_width;

    ResolutionMeasurement out;
    out.axis = axis;
    out.peak_location = peak;
    out.peak_value = peak_value;
    out.half_width = measure_half_width([&](double d) { return image(centre + d * dir); }, peak_value, step, window);
    out.half_width_neg =
        measure_half_width([&](double d) { return image(centre - d * dir); }, peak_value, step, window);
    out.full_width = out.half_width + out.half_width_neg;
    return out;
}

double cross_range_width_theory(const AcquisitionGeometry &geom, double epsilon)
{
    const double M = geom.num_freq_M();
    const double N = geom.num_positions();
    return std::sqrt(epsilon) * (geom.wave_speed() / geom.bandwidth()) * (geom.distance_L() / geom.aperture()) *
           (6.0 / kPi) * std::sqrt((M - 1.0) / (M + 1.0)) * std::sqrt((N - 1.0) / (N + 1.0));
}

double range_width_theory(const AcquisitionGeometry &geom, double epsilon)
{
    if (geom.range_offset() == 0.0)
        return std::numeric_limits<double>::infinity();
    return (std::sqrt(3.0) / kPi) * std::sqrt(epsilon) * (geom.wave_speed() / geom.bandwidth()) *
           (geom.distance_L() / geom.range_offset());
}

LineFit loglog_fit(std::span<const double> xs, std::span<const double> ys)
{
    if (xs.size() != ys.size())
        throw DimensionError("loglog_fit: xs and ys differ in length");
    if (xs.size() < 3)
        throw DomainError("loglog_fit needs at least 3 points");
    const auto n = static_cast<double>(xs.size());
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0))
            throw DomainError("loglog_fit needs strictly positive data");
        sx += std::log(xs[i]);
        sy += std::log(ys[i]);
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = std::log(xs[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(ys[i]) - my);
    }
    if (!(sxx > 0.0))
        throw DomainError("loglog_fit needs at least two distinct x values");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    return fit;
}

double reflectivity_error(Complex rho_hat, Complex rho)
{
    if (std::abs(rho) == 0.0)
        throw DomainError("reflectivity error is undefined for a zero reflectivity");
    return std::abs(rho - rho_hat) / std::abs(rho);
}

StabilityReport image_snr(std::span<const std::vector<Complex>> realizations, const GridSpec &window,
                          const std::string &functional)
{
    if (realizations.size() < 2)
        throw DomainError("image SNR needs at least two realizations");
    const std::size_t points = window.size();
    for (const auto &r : realizations)
        if (r.size() != points)
            throw DimensionError("realization size does not match the window");

    StabilityReport report;
    report.functional = functional;
    report.num_realizations = static_cast<int>(realizations.size());
    report.window = window;
    report.pointwise_snr.resize(points);

    const auto count = static_cast<double>(realizations.size());
    const std::size_t centre = static_cast<std::size_t>(window.ny / 2) * static_cast<std::size_t>(window.nx) +
                               static_cast<std::size_t>(window.nx / 2);
    for (const auto &r : realizations)
        report.peak_values.push_back(std::abs(r[centre]));

    double sum = 0.0;
    bool unbounded = false;
    for (std::size_t i = 0; i < points; ++i) {
        Complex mean{0.0, 0.0};
        for (const auto &r : realizations)
            mean += r[i];
        mean /= count;
        double ss = 0.0;
        for (const auto &r : realizations)
            ss += std::norm(r[i] - mean);
        const double sd = std::sqrt(ss / (count - 1.0));
        if (sd == 0.0) {
            report.pointwise_snr[i] = std::numeric_limits<double>::infinity();
            unbounded = true;
        } else {
            report.pointwise_snr[i] = std::abs(mean) / sd;
            sum += report.pointwise_snr[i];
        }
    }
    report.image_snr = unbounded ? std::numeric_limits<double>::infinity() : sum / static_cast<double>(points);
    return report;
}

Peak find_peak(const ImageGrid &image)
{
    if (image.values.empty())
        throw DimensionError("find_peak on an empty image");
    std::size_t best = 0;
    double best_value = image.display(0);
    for (std::size_t i = 1; i < image.values.size(); ++i) {
        const double v = image.display(i);
        if (v > best_value) {
            best = i;
            best_value = v;
        }
    }
    const auto ix = static_cast<int>(best % static_cast<std::size_t>(image.grid.nx));
    const auto iy = static_cast<int>(best / static_cast<std::size_t>(image.grid.nx));
    return {image.grid.point(ix, iy), best_value, best};
}

std::vector<std::size_t> local_maxima(const ImageGrid &image)
{
    const int nx = image.grid.nx;
    const int ny = image.grid.ny;
    std::vector<std::size_t> out;
    auto at = [&](int ix, int iy) {
        return image.display(static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(ix));
    };
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const double v = at(ix, iy);
            bool is_max = true;
            bool strict = false;
            for (int dy = -1; dy <= 1 && is_max; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0)
                        continue;
                    const int jx = ix + dx;
                    const int jy = iy + dy;
                    if (jx < 0 || jy < 0 || jx >= nx || jy >= ny)
                        continue;
                    const double w = at(jx, jy);
                    if (w > v) {
                        is_max = false;
                        break;
                    }
                    if (w < v)
                        strict = true;
                }
            if (is_max && strict)
                out.push_back(static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(ix));
        }
    return out;
}

int targets_with_local_maximum(const ImageGrid &image, std::span<const Vec3> targets, int cells)
{
    const auto maxima = local_maxima(image);
    const auto &g = image.grid;
    const double hx = g.spacing_x();
    const double hy = g.spacing_y();
    int hits = 0;
    for (const auto &t : targets) {
        // Fractional grid index of the target.
        const double tx = hx > 0.0 ? (t.x() - g.center.x()) / hx + 0.5 * (g.nx - 1) : 0.0;
        const double ty = hy > 0.0 ? (t.y() - g.center.y()) / hy + 0.5 * (g.ny - 1) : 0.0;
        for (const auto idx : maxima) {
            const auto ix = static_cast<double>(idx % static_cast<std::size_t>(g.nx));
            const auto iy = static_cast<double>(idx / static_cast<std::size_t>(g.nx));
            if (std::abs(ix - tx) <= cells + 1e-9 && std::abs(iy - ty) <= cells + 1e-9) {
                ++hits;
                break;
            }
        }
    }
    return hits;
}

} // namespace sarsub
