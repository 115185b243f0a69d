/*
 * Copyright 2026 dcs-lab contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DCS_RECOVERY_TYPES_HPP
#define DCS_RECOVERY_TYPES_HPP

#include <vector>

#include "dcs/model.hpp"

namespace dcs {

/// Perfectly known signal of node 0 plus its measurement vector (the
/// measurements go through the same quantization pipeline as everyone
/// else's, so y_1 may be a dequantized reconstruction).
struct SideInformation {
  Vec theta_1;
  Vec y_1;
};

struct NodeDiagnostics {
  bool solved = false;  // false for the SI passthrough slot
  bool converged = true;
  int iterations = 0;
  double residual_norm = 0.0;
};

/// Joint reconstruction output. theta_hat[0] is the side-information
/// passthrough for the SI-based algorithms; per-node diagnostics cover the
/// solve that produced each node (the SI node's slot stays trivial), and
/// shared_solves holds solves that feed every node (Texas DOI's innovation
/// of node 0, Texas Hold 'Em's common component).
struct EnsembleRecovery {
  std::vector<Vec> theta_hat;
  std::vector<NodeDiagnostics> per_node;
  std::vector<NodeDiagnostics> shared_solves;

  std::size_t nodes() const { return theta_hat.size(); }

  /// Fraction of actual solver invocations that converged.
  double converged_fraction() const {
    int total = 0, good = 0;
    for (const auto& d : per_node) {
      if (!d.solved) continue;
      ++total;
      good += d.converged ? 1 : 0;
    }
    for (const auto& d : shared_solves) {
      ++total;
      good += d.converged ? 1 : 0;
    }
    return total == 0 ? 1.0 : static_cast<double>(good) / total;
  }
};

}  // namespace dcs

#endif  // DCS_RECOVERY_TYPES_HPP
