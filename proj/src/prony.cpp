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

#include "sarsub/prony.hpp"

#include "sarsub/errors.hpp"

namespace sarsub {

Eigen::MatrixXcd pronyfy(std::span<const Complex> column)
{
    if (column.size() % 2 == 0 || column.size() < 3)
        throw DimensionError("Prony column length must be 2M-1 with M >= 2, got " + std::to_string(column.size()));
    const auto M = static_cast<Eigen::Index>((column.size() + 1) / 2);
    Eigen::MatrixXcd block(M, M);
    for (Eigen::Index j = 0; j < M; ++j)
        for (Eigen::Index i = 0; i < M; ++i)
            block(i, j) = column[static_cast<std::size_t>(i + j)];
    return block;
}

PronyBlocks assemble_blocks(const DataCube &cube)
{
    const auto &geom = cube.geometry;
    if (cube.values.rows() != geom.num_frequencies() || cube.values.cols() != geom.num_positions())
        throw DimensionError("data cube is " + std::to_string(cube.values.rows()) + "x" +
                             std::to_string(cube.values.cols()) + " but geometry expects " +
                             std::to_string(geom.num_frequencies()) + "x" + std::to_string(geom.num_positions()));
    PronyBlocks out;
    out.block_size = geom.num_freq_M();
    out.blocks.reserve(static_cast<std::size_t>(cube.values.cols()));
    for (Eigen::Index n = 0; n < cube.values.cols(); ++n) {
        const Eigen::VectorXcd column = cube.values.col(n);
        out.blocks.push_back(pronyfy(std::span<const Complex>(column.data(), static_cast<std::size_t>(column.size()))));
    }
    return out;
}

} // namespace sarsub
