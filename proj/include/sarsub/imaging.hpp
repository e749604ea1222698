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
#include "sarsub/subspace.hpp"
#include "sarsub/types.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace sarsub {

using BlockVector = std::vector<Eigen::VectorXcd>;

/// a_n(y)[m] = exp(i 2 w_m |x_n - y| / c) / (4 pi |x_n - y|), first M frequencies.
BlockVector illumination_a(const Vec3 &y, const AcquisitionGeometry &geom);

/// b_n(y)[k] = exp(-i 2 k dw |x_n - y| / c) / (4 pi |x_n - y|), k = 0..M-1.
BlockVector illumination_b(const Vec3 &y, const AcquisitionGeometry &geom);

/// F_eps(y) = (1/N) sum_n a_n^* U_n S_n^+ U_n^* a_n. Real; the imaginary part of the
/// Hermitian form is checked against 1e-8 relative and raises NumericalError.
double f_epsilon(const Vec3 &y, const BlockSVD &svd, const RegularizedSpectrum &spectrum,
                 const AcquisitionGeometry &geom);

/// R_eps(y) = (1/N) sum_n b_n^* V_n S_n^+ U_n^* a_n.
Complex r_epsilon(const Vec3 &y, const BlockSVD &svd, const RegularizedSpectrum &spectrum,
                  const AcquisitionGeometry &geom);

/// Backprojection (1/(N(2M-1))) sum_{n,m} d_n(w_m) exp(-i 2 w_m |x_n - y| / c).
Complex sar_value(const DataCube &cube, const Vec3 &y);

/// Coherent interferometry: pair correlations of backpropagated data within
/// |x_n - x_n'| <= x_d and |w_m - w_m'| <= 2 pi omega_d, real part, normalized
/// by (N(2M-1))^2 so that the all-pairs limit equals |sar_value|^2. Not clipped.
double cint_value(const DataCube &cube, const Vec3 &y, double x_d, double omega_d);

enum class Functional { inverse_f, inverse_r, sar, sar_abs, cint };

const char *to_string(Functional f) noexcept;
Functional functional_from_string(const std::string &name);

struct ImageMetadata {
    Functional functional = Functional::inverse_f;
    double epsilon = std::numeric_limits<double>::quiet_NaN();
    double tau_gap = std::numeric_limits<double>::quiet_NaN();
    double x_d = std::numeric_limits<double>::quiet_NaN();
    double omega_d = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t noise_seed = 0;
    std::uint64_t medium_seed = 0;
    int realization = -1;
    double k0 = 0.0;
    std::string geometry_hash;
};

/// Image values on a GridSpec in row-major order (x fastest).
struct ImageGrid {
    GridSpec grid;
    std::vector<Complex> values;
    bool complex_valued = false;
    ImageMetadata meta;

    double real(std::size_t i) const { return values[i].real(); }
    // Display magnitude: modulus for complex images, value clipped at 0 for CINT.
    double display(std::size_t i) const;
};

using PointFunctional = std::function<Complex(const Vec3 &)>;

/// Maps `fn` over every grid node in parallel; output order is the grid order.
ImageGrid evaluate_grid(const GridSpec &grid, const PointFunctional &fn, bool complex_valued, ImageMetadata meta,
                        int threads = 1);

ImageGrid inverse_f_image(const BlockSVD &svd, const RegularizedSpectrum &spectrum, const AcquisitionGeometry &geom,
                          const GridSpec &grid, int threads = 1);
ImageGrid inverse_r_image(const BlockSVD &svd, const RegularizedSpectrum &spectrum, const AcquisitionGeometry &geom,
                          const GridSpec &grid, int threads = 1);
/// |sar_value| over the grid.
ImageGrid classical_sar_image(const DataCube &cube, const GridSpec &grid, int threads = 1);
/// Complex sar_value over the grid.
ImageGrid sar_complex_image(const DataCube &cube, const GridSpec &grid, int threads = 1);
ImageGrid cint_image(const DataCube &cube, const GridSpec &grid, double x_d, double omega_d, int threads = 1);

} // namespace sarsub
