// Copyright 2026 The dualchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DUALCHAN_TRANSPOSE_HPP
#define DUALCHAN_TRANSPOSE_HPP

#include <optional>
#include <stdexcept>

#include "dualchan/channel.hpp"
#include "dualchan/linalg.hpp"

namespace dualchan {

// Postselection probabilities below this floor yield no conditional state.
inline constexpr double kSuccessFloor = 1e-12;

struct TransposeSimResult {
  std::optional<DensityOperator> conditional_state;  // N^T(rho)/tr, on A'
  double p_suc = 0.0;
};

// Exact postselected-teleportation simulation of the channel transpose:
// prepare Phi/d_A, send one half through N, Bell-project against the input.
// The unnormalized output is tr_B[choi (I (x) rho^T)] / (d_A d_B) = N^T(rho)
// / (d_A d_B), and the heralding probability is its trace.
inline TransposeSimResult simulate_transpose(const QuantumChannel& n,
                                             const DensityOperator& rho) {
  if (rho.dim() != n.d_out)
    throw std::invalid_argument("simulate_transpose: input state enters at B', side must be d_out");
  const ComplexMatrix weighted =
      n.choi * tensor(identity(n.d_in), rho.matrix.transpose().eval());
  ComplexMatrix unnormalized = partial_trace(weighted, SystemDims{n.d_in, n.d_out}, {0});
  unnormalized /= static_cast<double>(n.d_in * n.d_out);

  TransposeSimResult result;
  result.p_suc = real_trace(unnormalized);
  if (result.p_suc > kSuccessFloor)
    result.conditional_state = DensityOperator{unnormalized / result.p_suc};
  return result;
}

inline double success_probability(const QuantumChannel& n, const DensityOperator& rho) {
  const double p = simulate_transpose(n, rho).p_suc;
  return std::min(std::max(p, 0.0), 1.0);
}

}  // namespace dualchan

#endif  // DUALCHAN_TRANSPOSE_HPP
