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

#include "sarsub/imaging.hpp"

#include "sarsub/errors.hpp"
#include "sarsub/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace sarsub {

namespace {

double platform_distance(const AcquisitionGeometry &geom, int n, const Vec3 &y)
{
    const double r = (geom.position(n) - y).norm();
    if (!(r > 0.0))
        throw SingularGeometryError("search point coincides with platform position " + std::to_string(n));
    return r;
}

void fill_a(const AcquisitionGeometry &geom, double r, Eigen::VectorXcd &out)
{
    const int M = geom.num_freq_M();
    const double scale = 1.0 / (4.0 * kPi * r);
    const PhaseRamp phase(geom, 2.0 * r / geom.wave_speed());
    out.resize(M);
    for (int m = 0; m < M; ++m)
        out[m] = phase(m, scale);
}

void fill_b(const AcquisitionGeometry &geom, double r, Eigen::VectorXcd &out)
{
    const int M = geom.num_freq_M();
    const double scale = 1.0 / (4.0 * kPi * r);
    const double step = std::remainder(-2.0 * geom.delta_omega() * r / geom.wave_speed(), 2.0 * kPi);
    out.resize(M);
    for (int k = 0; k < M; ++k)
        out[k] = std::polar(scale, k * step);
}

void check_inputs(const BlockSVD &svd, const RegularizedSpectrum &spectrum, const AcquisitionGeometry &geom)
{
    const auto N = static_cast<std::size_t>(geom.num_positions());
    if (svd.factors.size() != N || spectrum.inverse.size() != N)
        throw DimensionError("SVD/spectrum block count does not match the number of positions");
}

// Index ranges [lo, hi] of partners within `radius` on a sorted axis.
std::vector<std::pair<int, int>> window_ranges(std::span<const double> coords, double radius)
{
    const auto count = static_cast<int>(coords.size());
    const double slack = 1e-12 * (std::abs(radius) + 1.0);
    std::vector<std::pair<int, int>> out(coords.size());
    for (int i = 0; i < count; ++i) {
        int lo = i;
        int hi = i;
        while (lo > 0 && std::abs(coords[static_cast<std::size_t>(lo - 1)] - coords[static_cast<std::size_t>(i)]) <=
                             radius * (1.0 + 1e-12) + slack)
            --lo;
        while (hi + 1 < count &&
               std::abs(coords[static_cast<std::size_t>(hi + 1)] - coords[static_cast<std::size_t>(i)]) <=
                   radius * (1.0 + 1e-12) + slack)
            ++hi;
        out[static_cast<std::size_t>(i)] = {lo, hi};
    }
    return out;
}

// g(m, n) = d_n(w_m) exp(-i 2 w_m |x_n - y| / c)
Eigen::MatrixXcd backpropagate(const DataCube &cube, const Vec3 &y)
{
    const auto &geom = cube.geometry;
    const int N = geom.num_positions();
    const int F = geom.num_frequencies();
    if (cube.values.rows() != F || cube.values.cols() != N)
        throw DimensionError("data cube does not match its geometry");
    Eigen::MatrixXcd g(F, N);
    for (int n = 0; n < N; ++n) {
        const PhaseRamp phase(geom, -2.0 * platform_distance(geom, n, y) / geom.wave_speed());
        for (int m = 0; m < F; ++m)
            g(m, n) = cube.values(m, n) * phase(m);
    }
    return g;
}

} // namespace

BlockVector illumination_a(const Vec3 &y, const AcquisitionGeometry &geom)
{
    BlockVector out(static_cast<std::size_t>(geom.num_positions()));
    for (int n = 0; n < geom.num_positions(); ++n)
        fill_a(geom, platform_distance(geom, n, y), out[static_cast<std::size_t>(n)]);
    return out;
}

BlockVector illumination_b(const Vec3 &y, const AcquisitionGeometry &geom)
{
    BlockVector out(static_cast<std::size_t>(geom.num_positions()));
    for (int n = 0; n < geom.num_positions(); ++n)
        fill_b(geom, platform_distance(geom, n, y), out[static_cast<std::size_t>(n)]);
    return out;
}

double f_epsilon(const Vec3 &y, const BlockSVD &svd, const RegularizedSpectrum &spectrum,
                 const AcquisitionGeometry &geom)
{
    check_inputs(svd, spectrum, geom);
    const int N = geom.num_positions();
    Eigen::VectorXcd a;
    Complex sum{0.0, 0.0};
    for (int n = 0; n < N; ++n) {
        const auto nu = static_cast<std::size_t>(n);
        fill_a(geom, platform_distance(geom, n, y), a);
        const auto &f = svd.factors[nu];
        const Eigen::VectorXcd weighted = spectrum.inverse[nu].cwiseProduct(f.U.adjoint() * a);
        sum += a.dot(f.U * weighted); // dot() conjugates its left operand
    }
    sum /= static_cast<double>(N);
    if (std::abs(sum.imag()) > 1e-8 * std::abs(sum.real()) && std::abs(sum.imag()) > 0.0)
        throw NumericalError("imaging functional F is not Hermitian at the search point");
    return sum.real();
}

Complex r_epsilon(const Vec3 &y, const BlockSVD &svd, const RegularizedSpectrum &spectrum,
                  const AcquisitionGeometry &geom)
{
    check_inputs(svd, spectrum, geom);
    const int N = geom.num_positions();
    Eigen::VectorXcd a;
    Eigen::VectorXcd b;
    Complex sum{0.0, 0.0};
    for (int n = 0; n < N; ++n) {
        const auto nu = static_cast<std::size_t>(n);
        const double r = platform_distance(geom, n, y);
        fill_a(geom, r, a);
        fill_b(geom, r, b);
        const auto &f = svd.factors[nu];
        const Eigen::VectorXcd weighted = spectrum.inverse[nu].cwiseProduct(f.U.adjoint() * a);
        sum += b.dot(f.V * weighted);
    }
    return sum / static_cast<double>(N);
}

Complex sar_value(const DataCube &cube, const Vec3 &y)
{
    const Eigen::MatrixXcd g = backpropagate(cube, y);
    return g.sum() / static_cast<double>(g.size());
}

double cint_value(const DataCube &cube, const Vec3 &y, double x_d, double omega_d)
{
    if (!(x_d > 0.0))
        throw ConfigError("x_d", "decoherence length must be positive");
    if (!(omega_d > 0.0))
        throw ConfigError("omega_d", "decoherence frequency must be positive");
    const auto &geom = cube.geometry;
    const Eigen::MatrixXcd g = backpropagate(cube, y);

    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(geom.num_positions()));
    for (const auto &p : geom.positions())
        xs.push_back(p.x());
    if (!std::is_sorted(xs.begin(), xs.end()))
        throw DomainError("CINT windows need platform positions ordered along the track");
    const auto pos_win = window_ranges(xs, x_d);
    const auto freq_win = window_ranges(geom.frequencies(), 2.0 * kPi * omega_d);

    const auto F = g.rows();
    const auto N = g.cols();
    // Box-filter over frequency, then over position; the windows are separable.
    Eigen::MatrixXcd h(F, N);
    for (Eigen::Index n = 0; n < N; ++n)
        for (Eigen::Index m = 0; m < F; ++m) {
            const auto [lo, hi] = freq_win[static_cast<std::size_t>(m)];
            h(m, n) = g.col(n).segment(lo, hi - lo + 1).sum();
        }
    double total = 0.0;
    for (Eigen::Index n = 0; n < N; ++n) {
        const auto [lo, hi] = pos_win[static_cast<std::size_t>(n)];
        const Eigen::VectorXcd k = h.middleCols(lo, hi - lo + 1).rowwise().sum();
        total += g.col(n).dot(k).real();
    }
    const double norm = static_cast<double>(F * N);
    return total / (norm * norm);
}

const char *to_string(Functional f) noexcept
{
    switch (f) {
    case Functional::inverse_f:
        return "inverse_f";
    case Functional::inverse_r:
        return "inverse_r";
    case Functional::sar:
        return "sar";
    case Functional::sar_abs:
        return "sar_abs";
    case Functional::cint:
        return "cint";
    }
    return "unknown";
}

Functional functional_from_string(const std::string &name)
{
    for (auto f : {Functional::inverse_f, Functional::inverse_r, Functional::sar, Functional::sar_abs,
                   Functional::cint})
        if (name == to_string(f))
            return f;
    throw ConfigError("functional", "unknown functional '" + name + "'");
}

double ImageGrid::display(std::size_t i) const
{
    if (complex_valued)
        return std::abs(values[i]);
    if (meta.functional == Functional::cint)
        return std::max(values[i].real(), 0.0);
    return values[i].real();
}

ImageGrid evaluate_grid(const GridSpec &grid, const PointFunctional &fn, bool complex_valued, ImageMetadata meta,
                        int threads)
{
    const auto points = grid_points(grid);
    ImageGrid out{grid, std::vector<Complex>(points.size()), complex_valued, std::move(meta)};
    parallel_for(points.size(), threads, [&](std::size_t i) {
        const Complex v = fn(points[i]);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericalError("non-finite image value at grid point " + std::to_string(i));
        out.values[i] = v;
    });
    return out;
}

namespace {

ImageMetadata base_meta(Functional f, const AcquisitionGeometry &geom)
{
    ImageMetadata meta;
    meta.functional = f;
    meta.k0 = geom.k0();
    meta.geometry_hash = geom.hash();
    return meta;
}

ImageMetadata cube_meta(Functional f, const DataCube &cube)
{
    auto meta = base_meta(f, cube.geometry);
    meta.noise_seed = cube.provenance.noise_seed;
    meta.medium_seed = cube.provenance.medium_seed;
    return meta;
}

} // namespace

ImageGrid inverse_f_image(const BlockSVD &svd, const RegularizedSpectrum &spectrum, const AcquisitionGeometry &geom,
                          const GridSpec &grid, int threads)
{
    auto meta = base_meta(Functional::inverse_f, geom);
    meta.epsilon = spectrum.epsilon;
    meta.tau_gap = spectrum.tau_gap;
    return evaluate_grid(
        grid, [&](const Vec3 &y) { return Complex(1.0 / f_epsilon(y, svd, spectrum, geom), 0.0); }, false,
        std::move(meta), threads);
}

ImageGrid inverse_r_image(const BlockSVD &svd, const RegularizedSpectrum &spectrum, const AcquisitionGeometry &geom,
                          const GridSpec &grid, int threads)
{
    auto meta = base_meta(Functional::inverse_r, geom);
    meta.epsilon = spectrum.epsilon;
    meta.tau_gap = spectrum.tau_gap;
    return evaluate_grid(
        grid, [&](const Vec3 &y) { return 1.0 / r_epsilon(y, svd, spectrum, geom); }, true, std::move(meta),
        threads);
}

ImageGrid classical_sar_image(const DataCube &cube, const GridSpec &grid, int threads)
{
    return evaluate_grid(
        grid, [&](const Vec3 &y) { return Complex(std::abs(sar_value(cube, y)), 0.0); }, false,
        cube_meta(Functional::sar_abs, cube), threads);
}

ImageGrid sar_complex_image(const DataCube &cube, const GridSpec &grid, int threads)
{
    return evaluate_grid(
        grid, [&](const Vec3 &y) { return sar_value(cube, y); }, true, cube_meta(Functional::sar, cube), threads);
}

ImageGrid cint_image(const DataCube &cube, const GridSpec &grid, double x_d, double omega_d, int threads)
{
    auto meta = cube_meta(Functional::cint, cube);
    meta.x_d = x_d;
    meta.omega_d = omega_d;
    return evaluate_grid(
        grid, [&](const Vec3 &y) { return Complex(cint_value(cube, y, x_d, omega_d), 0.0); }, false,
        std::move(meta), threads);
}

} // namespace sarsub
