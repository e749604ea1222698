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

#include "sarsub/subspace.hpp"

#include "sarsub/errors.hpp"
#include "sarsub/parallel.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

namespace sarsub {

BlockSVD block_svd(const PronyBlocks &blocks, int threads)
{
    BlockSVD out;
    out.factors.resize(blocks.blocks.size());
    parallel_for(blocks.blocks.size(), threads, [&](std::size_t n) {
        const auto &block = blocks.blocks[n];
        if (!block.allFinite())
            throw NumericalError("Prony block " + std::to_string(n) + " has non-finite entries");
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block, Eigen::ComputeFullU | Eigen::ComputeFullV);
        if (svd.info() != Eigen::Success)
            throw NumericalError("SVD did not converge for Prony block " + std::to_string(n));
        out.factors[n] = BlockFactors{svd.matrixU(), svd.singularValues(), svd.matrixV()};
    });
    return out;
}

RegularizedSpectrum regularize_spectrum(const BlockSVD &svd, double epsilon, double tau_gap,
                                        std::optional<int> rank_override, SignalWeighting weighting)
{
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw ConfigError("epsilon", "must be positive");
    if (!(tau_gap > 0.0 && tau_gap < 1.0))
        throw ConfigError("tau_gap", "must lie in (0, 1)");

    RegularizedSpectrum out;
    out.epsilon = epsilon;
    out.tau_gap = tau_gap;
    out.weighting = weighting;
    out.inverse.reserve(svd.factors.size());
    out.rank.reserve(svd.factors.size());

    for (std::size_t n = 0; n < svd.factors.size(); ++n) {
        const Eigen::VectorXd &s = svd.factors[n].singular_values;
        const auto M = static_cast<int>(s.size());
        Eigen::VectorXd inv = Eigen::VectorXd::Zero(M);
        const double s1 = M > 0 ? s[0] : 0.0;
        if (!(s1 > 0.0)) {
            out.inverse.push_back(std::move(inv));
            out.rank.push_back(0);
            continue;
        }

        int rank = 0;
        if (rank_override) {
            if (*rank_override < 0 || *rank_override > M)
                throw ConfigError("rank_override", "must lie in [0, M]");
            rank = *rank_override;
        } else {
            while (rank < M && s[rank] >= tau_gap * s1)
                ++rank;
        }

        for (int j = 0; j < M; ++j) {
            if (j < rank && s[j] > 0.0)
                inv[j] = weighting == SignalWeighting::pseudo_inverse ? 1.0 / s[j] : s[j] / (s1 * s1);
            else
                inv[j] = 1.0 / (epsilon * s1);
        }
        out.inverse.push_back(std::move(inv));
        out.rank.push_back(rank);
    }
    return out;
}

} // namespace sarsub
