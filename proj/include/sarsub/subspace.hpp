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

#include "sarsub/prony.hpp"
#include "sarsub/types.hpp"

#include <optional>
#include <vector>

namespace sarsub {

struct BlockFactors {
    Eigen::MatrixXcd U;
    Eigen::VectorXd singular_values; // nonincreasing
    Eigen::MatrixXcd V;
};

/// Full SVD D_n = U_n diag(s) V_n^* of every Prony block.
struct BlockSVD {
    std::vector<BlockFactors> factors;
};

/// Per-block SVDs. Blocks are independent and processed with up to `threads` workers.
BlockSVD block_svd(const PronyBlocks &blocks, int threads = 1);

/// Weighting applied to the signal-subspace entries of the regularized inverse.
enum class SignalWeighting {
    pseudo_inverse, // 1/sigma_j (Moore-Penrose on the signal subspace)
    as_published,   // sigma_j/sigma_1^2
};

struct RegularizedSpectrum {
    std::vector<Eigen::VectorXd> inverse; // per block, length M
    std::vector<int> rank;                // detected signal dimension per block
    double epsilon = 0.0;
    double tau_gap = 0.0;
    SignalWeighting weighting = SignalWeighting::pseudo_inverse;
};

inline constexpr double kDefaultTauGap = 0.01;

/// Regularized inverse spectrum of every block.
///
/// The signal rank is the count of sigma_j >= tau_gap * sigma_1 unless
/// `rank_override` is given. Noise entries are 1/(epsilon sigma_1); an all-zero
/// block yields an all-zero spectrum with rank 0.
RegularizedSpectrum regularize_spectrum(const BlockSVD &svd, double epsilon, double tau_gap = kDefaultTauGap,
                                        std::optional<int> rank_override = std::nullopt,
                                        SignalWeighting weighting = SignalWeighting::pseudo_inverse);

} // namespace sarsub
