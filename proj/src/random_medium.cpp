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

#include "sarsub/random_medium.hpp"

#include "sarsub/errors.hpp"
#include "sarsub/rng.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>

namespace sarsub {

namespace {

// Planner calls are not thread-safe in FFTW.
std::mutex &planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(fftw_complex *p) const noexcept { fftw_free(p); }
};

// In-place forward 3-D DFT of `data` with dimensions (n0 slowest .. n2 fastest).
void dft3_inplace(fftw_complex *data, int n0, int n1, int n2)
{
    fftw_plan plan = nullptr;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_3d(n0, n1, n2, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    if (plan == nullptr)
        throw NumericalError("FFTW failed to create a plan");
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

constexpr double kDegenerate = 1e-9;

} // namespace

void RandomMediumSpec::validate() const
{
    if (!(correlation_length_ell > 0.0))
        throw ConfigError("medium.correlation_length_ell", "must be positive");
    if (!(fluctuation_strength_sigma >= 0.0))
        throw ConfigError("medium.fluctuation_strength_sigma", "must be non-negative");
    if (!(background_speed_c0 > 0.0))
        throw ConfigError("medium.background_speed_c0", "must be positive");
    if (!(field_grid_resolution > 0.0))
        throw ConfigError("medium.field_grid_resolution", "must be positive");
    if (!(integral_step > 0.0) || integral_step > correlation_length_ell / 10.0 * (1.0 + 1e-12))
        throw ConfigError("medium.integral_step", "must be positive and at most ell/10");
}

double RandomMediumSpec::correlation(double r) const noexcept
{
    const double s = r / correlation_length_ell;
    return std::exp(-0.5 * s * s);
}

bool BoundingBox::contains(const Vec3 &p, double slack) const
{
    return (p.array() >= lo.array() - slack).all() && (p.array() <= hi.array() + slack).all();
}

BoundingBox BoundingBox::enclosing(std::span<const Vec3> a, std::span<const Vec3> b, double margin)
{
    if (a.empty() && b.empty())
        return {};
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    for (const auto &p : a) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    for (const auto &p : b) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    for (int d = 0; d < 3; ++d)
        if (hi[d] - lo[d] > 0.0) {
            lo[d] -= margin;
            hi[d] += margin;
        }
    return {lo, hi};
}

RandomField::RandomField(Vec3 origin, double spacing, std::array<int, 3> dims, std::vector<double> values)
    : origin_(std::move(origin)), spacing_(spacing), dims_(dims), values_(std::move(values))
{
    if (!(spacing_ > 0.0) || dims_[0] < 1 || dims_[1] < 1 || dims_[2] < 1)
        throw DimensionError("random field needs positive spacing and dimensions");
    if (values_.size() != static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2])
        throw DimensionError("random field value count does not match its dimensions");
}

RandomField RandomField::constant(const BoundingBox &box, double value)
{
    const Vec3 ext = box.extent();
    const double spacing = std::max(ext.maxCoeff(), 1.0);
    std::array<int, 3> dims{};
    for (int d = 0; d < 3; ++d)
        dims[static_cast<std::size_t>(d)] = ext[d] > 0.0 ? 2 : 1;
    // Two nodes spanning at least the box on every non-degenerate axis.
    const auto count = static_cast<std::size_t>(dims[0] * dims[1] * dims[2]);
    return RandomField(box.lo, spacing, dims, std::vector<double>(count, value));
}

bool RandomField::contains(const Vec3 &p) const
{
    for (int d = 0; d < 3; ++d) {
        const double t = (p[d] - origin_[d]) / spacing_;
        const int n = dims_[static_cast<std::size_t>(d)];
        if (n == 1) {
            if (std::abs(t) > kDegenerate * 1e3)
                return false;
        } else if (t < -kDegenerate || t > (n - 1) + kDegenerate) {
            return false;
        }
    }
    return true;
}

double RandomField::operator()(const Vec3 &p) const
{
    std::array<int, 3> base{};
    std::array<double, 3> frac{};
    for (int d = 0; d < 3; ++d) {
        const auto du = static_cast<std::size_t>(d);
        const int n = dims_[du];
        if (n == 1)
            continue;
        const double t = std::clamp((p[d] - origin_[d]) / spacing_, 0.0, static_cast<double>(n - 1));
        int i = static_cast<int>(std::floor(t));
        if (i >= n - 1)
            i = n - 2;
        base[du] = i;
        frac[du] = t - i;
    }
    double acc = 0.0;
    for (int corner = 0; corner < 8; ++corner) {
        double w = 1.0;
        std::array<int, 3> idx = base;
        bool skip = false;
        for (int d = 0; d < 3; ++d) {
            const auto du = static_cast<std::size_t>(d);
            const bool upper = (corner >> d) & 1;
            if (dims_[du] == 1) {
                if (upper)
                    skip = true;
                continue;
            }
            w *= upper ? frac[du] : 1.0 - frac[du];
            idx[du] += upper ? 1 : 0;
        }
        if (!skip && w != 0.0)
            acc += w * values_[index(idx[0], idx[1], idx[2])];
    }
    return acc;
}

RandomField sample_random_medium(const RandomMediumSpec &spec, const BoundingBox &domain, std::uint64_t seed)
{
    spec.validate();
    const double ell = spec.correlation_length_ell;
    const Vec3 ext = domain.extent();
    if (!(ext.array() >= 0.0).all())
        throw ConfigError("medium.domain", "bounding box is inverted");
    if (ext.maxCoeff() < ell)
        throw ConfigError("medium.domain", "domain is smaller than one correlation length");

    const double h = std::min(spec.field_grid_resolution, ell / 5.0);
    // Periodic padding beyond which the Gaussian kernel is below 1e-7.
    const int pad = static_cast<int>(std::ceil(6.0 * ell / h));

    std::array<int, 3> dims{};
    std::array<int, 3> period{};
    for (int d = 0; d < 3; ++d) {
        const auto du = static_cast<std::size_t>(d);
        if (ext[d] <= 0.0) {
            dims[du] = 1;
            period[du] = 1;
        } else {
            dims[du] = static_cast<int>(std::ceil(ext[d] / h)) + 1;
            period[du] = dims[du] + pad;
            period[du] += period[du] % 2;
        }
    }

    const std::size_t total = static_cast<std::size_t>(period[0]) * period[1] * period[2];
    std::unique_ptr<fftw_complex[], FftwFree> buf(fftw_alloc_complex(total));
    if (!buf)
        throw NumericalError("unable to allocate random-field workspace");
    auto *data = reinterpret_cast<std::complex<double> *>(buf.get());

    // Buffer layout: axis 2 (z) slowest, axis 0 (x) fastest, matching RandomField.
    auto flat = [&](int i, int j, int k) {
        return (static_cast<std::size_t>(k) * static_cast<std::size_t>(period[1]) + static_cast<std::size_t>(j)) *
                   static_cast<std::size_t>(period[0]) +
               static_cast<std::size_t>(i);
    };
    auto wrap = [](int i, int n) { return std::min(i, n - i); };
    for (int k = 0; k < period[2]; ++k)
        for (int j = 0; j < period[1]; ++j)
            for (int i = 0; i < period[0]; ++i) {
                const double dx = wrap(i, period[0]) * h;
                const double dy = wrap(j, period[1]) * h;
                const double dz = wrap(k, period[2]) * h;
                data[flat(i, j, k)] = spec.correlation(std::sqrt(dx * dx + dy * dy + dz * dz));
            }
    dft3_inplace(buf.get(), period[2], period[1], period[0]);

    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double inv_total = 1.0 / static_cast<double>(total);
    for (std::size_t q = 0; q < total; ++q) {
        const double eig = std::max(data[q].real(), 0.0);
        const double re = normal(rng);
        const double im = normal(rng);
        data[q] = std::sqrt(eig * inv_total) * Complex(re, im);
    }
    dft3_inplace(buf.get(), period[2], period[1], period[0]);

    std::vector<double> values(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2]);
    std::size_t out = 0;
    for (int k = 0; k < dims[2]; ++k)
        for (int j = 0; j < dims[1]; ++j)
            for (int i = 0; i < dims[0]; ++i)
                values[out++] = data[flat(i, j, k)].real();
    return RandomField(domain.lo, h, dims, std::move(values));
}

double travel_time_perturbation_from_medium(const RandomField &field, const RandomMediumSpec &spec, const Vec3 &x,
                                            const Vec3 &y)
{
    if (spec.fluctuation_strength_sigma == 0.0)
        return 0.0;
    if (!field.contains(x) || !field.contains(y))
        throw DomainError("travel path leaves the random-field domain");

    const Vec3 delta = x - y;
    const double length = delta.norm();
    if (length == 0.0)
        return 0.0;
    const int steps = std::max(1, static_cast<int>(std::ceil(length / spec.integral_step)));
    double sum = 0.5 * (field(y) + field(x));
    for (int s = 1; s < steps; ++s)
        sum += field(y + delta * (static_cast<double>(s) / steps));
    const double mean = sum / steps;
    return spec.fluctuation_strength_sigma * length / (2.0 * spec.background_speed_c0) * mean;
}

TravelTimePerturbation medium_perturbations(const RandomField &field, const RandomMediumSpec &spec,
                                            const AcquisitionGeometry &geom, std::span<const PointTarget> scene)
{
    TravelTimePerturbation out;
    out.model = PerturbationModel::random_medium;
    out.offsets.resize(static_cast<Eigen::Index>(scene.size()), geom.num_positions());
    for (std::size_t p = 0; p < scene.size(); ++p)
        for (int n = 0; n < geom.num_positions(); ++n)
            out.offsets(static_cast<Eigen::Index>(p), n) =
                travel_time_perturbation_from_medium(field, spec, geom.position(n), scene[p].position);
    return out;
}

MediumScalings dimensionless_scalings(const AcquisitionGeometry &geom, const RandomMediumSpec &spec)
{
    const double lambda = geom.wavelength();
    const double ell = spec.correlation_length_ell;
    const double L = geom.distance_L();
    if (!(lambda > 0.0) || !(ell > 0.0) || !(L > 0.0))
        throw DomainError("scalings need positive wavelength, correlation length and distance");
    MediumScalings s;
    s.sigma0 = lambda / std::sqrt(ell * L);
    const double sigma = spec.fluctuation_strength_sigma;
    s.sigma_tilde = sigma / s.sigma0;
    if (sigma > 0.0) {
        const double lhs = sigma * sigma * L * L * L / (ell * ell * ell);
        const double rhs = lambda * lambda / (sigma * sigma * ell * L);
        s.regime_ok = lhs < rhs;
    }
    return s;
}

} // namespace sarsub
