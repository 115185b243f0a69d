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

#ifndef DCS_ERRORS_HPP
#define DCS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dcs {

/// Invalid generator/solver parameters (sparsity exceeds n, infeasible
/// disjoint request, bad rates, ...).
struct invalid_params : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Operand shapes do not line up.
struct dimension_mismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A RIP constant outside the regime where the recovery guarantee holds.
struct invalid_regime : std::domain_error {
  using std::domain_error::domain_error;
};

/// l0 oracle instance exceeds the enumeration guard.
struct instance_too_large : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// TECC invoked with duplicated sensing matrices.
struct shared_matrix_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Experiment configuration failed validation.
struct invalid_config : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Filesystem-facing failures (unwritable output, corrupt measurement file).
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dcs

#endif  // DCS_ERRORS_HPP
