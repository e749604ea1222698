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
#include "sarsub/types.hpp"

#include <span>
#include <vector>

namespace sarsub {

/// Hankel rearrangement of one frequency column of length 2M-1.
///
/// Zero-based: H(i, j) = column(i + j), so the first column holds entries
/// 0..M-1 and the last row entries M-1..2M-2.
Eigen::MatrixXcd pronyfy(std::span<const Complex> column);

/// The block-diagonal Prony matrix stored as its N diagonal blocks.
struct PronyBlocks {
    std::vector<Eigen::MatrixXcd> blocks;
    int block_size = 0; // M
};

PronyBlocks assemble_blocks(const DataCube &cube);

} // namespace sarsub
