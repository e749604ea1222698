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

#include "sarsub/forward.hpp"
#include "sarsub/geometry.hpp"
#include "sarsub/types.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace sarsub {

enum class Autocorrelation { gaussian };

/// Weakly fluctuating medium 1/c^2(x) = (1 + sigma mu(x)) / c0^2.
///
/// mu is a stationary zero-mean field with R(0) = 1 and correlation
/// exp(-r^2 / (2 ell^2)) in physical coordinates.
struct RandomMediumSpec {
    double correlation_length_ell = 1.0;
    double fluctuation_strength_sigma = 0.0;
    double background_speed_c0 = 3.0e8;
    Autocorrelation autocorrelation = Autocorrelation::gaussian;
    double field_grid_resolution = 0.2; // upper bound on node spacing; clamped to ell/5
    double integral_step = 0.1;         // must not exceed ell/10

    void validate() const;
    double correlation(double r) const noexcept;
};

struct BoundingBox {
    Vec3 lo = Vec3::Zero();
    Vec3 hi = Vec3::Zero();

    Vec3 extent() const { return hi - lo; }
    bool contains(const Vec3 &p, double slack = 0.0) const;
    // Smallest box containing every platform-to-point segment, padded by `margin`.
    static BoundingBox enclosing(std::span<const Vec3> a, std::span<const Vec3> b, double margin);
};

/// Field values on a regular grid with multilinear interpolation.
///
/// Axes with zero domain extent collapse to a single node, so a flat
/// (z = const) acquisition produces a planar field.
class RandomField {
public:
    RandomField(Vec3 origin, double spacing, std::array<int, 3> dims, std::vector<double> values);

    static RandomField constant(const BoundingBox &box, double value);

    double operator()(const Vec3 &p) const;
    bool contains(const Vec3 &p) const;

    const Vec3 &origin() const noexcept { return origin_; }
    double spacing() const noexcept { return spacing_; }
    const std::array<int, 3> &dims() const noexcept { return dims_; }
    std::span<const double> values() const noexcept { return values_; }
    double node(int i, int j, int k) const { return values_[index(i, j, k)]; }

private:
    std::size_t index(int i, int j, int k) const noexcept
    {
        return (static_cast<std::size_t>(k) * static_cast<std::size_t>(dims_[1]) + static_cast<std::size_t>(j)) *
                   static_cast<std::size_t>(dims_[0]) +
               static_cast<std::size_t>(i);
    }

    Vec3 origin_;
    double spacing_;
    std::array<int, 3> dims_;
    std::vector<double> values_;
};

/// One realization of mu over `domain` by circulant-embedding spectral synthesis.
RandomField sample_random_medium(const RandomMediumSpec &spec, const BoundingBox &domain, std::uint64_t seed);

/// nu(x, y) = sigma |x - y| / (2 c0) * int_0^1 mu(y + (x - y) s) ds, composite trapezoid.
double travel_time_perturbation_from_medium(const RandomField &field, const RandomMediumSpec &spec, const Vec3 &x,
                                            const Vec3 &y);

/// Offsets nu(x_n, y_p) for every (target, position) pair.
TravelTimePerturbation medium_perturbations(const RandomField &field, const RandomMediumSpec &spec,
                                            const AcquisitionGeometry &geom, std::span<const PointTarget> scene);

struct MediumScalings {
    double sigma0 = 0.0;      // lambda / sqrt(ell L)
    double sigma_tilde = 0.0; // sigma / sigma0
    bool regime_ok = true;    // sigma^2 L^3 / ell^3 < lambda^2 / (sigma^2 ell L); advisory only
};

MediumScalings dimensionless_scalings(const AcquisitionGeometry &geom, const RandomMediumSpec &spec);

} // namespace sarsub
