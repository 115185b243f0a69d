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

#ifndef DCS_ANALYSIS_HPP
#define DCS_ANALYSIS_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dcs/errors.hpp"
#include "dcs/model.hpp"
#include "dcs/recovery_types.hpp"

namespace dcs {

/// Inputs of the closed-form performance bounds. valid_regime() is false
/// when delta_k is outside the range where the l1 recovery guarantee (and
/// hence bpdn_constant) applies.
struct BoundInputs {
  double C = 0.0;       // recovery-guarantee constant
  double delta_k = 0.0; // empirical RIP estimate
  int J = 1;
  double eta = 0.0;     // innovation l2 norm
  double eps = 0.0;     // noise norm

  bool valid_regime() const { return delta_k < std::sqrt(2.0) - 1.0; }
};

/// Per-entry mean square error over the non-side-information nodes:
/// (1/((J-1) n)) sum_{j>=1} ||theta_hat_j - theta_j||^2. Node 0 is excluded
/// because the side-information algorithms reproduce it exactly.
inline double ensemble_mse(const EnsembleRecovery& recovered,
                           const SignalEnsemble& truth) {
  const std::size_t J = truth.theta_I.size();
  if (recovered.theta_hat.size() != J)
    throw dimension_mismatch("ensemble_mse: node count mismatch");
  if (J < 2) throw dimension_mismatch("ensemble_mse: need J >= 2");
  const Eigen::Index n = truth.theta_C.size();
  double acc = 0.0;
  for (std::size_t j = 1; j < J; ++j) {
    if (recovered.theta_hat[j].size() != n)
      throw dimension_mismatch("ensemble_mse: signal length mismatch");
    acc += (recovered.theta_hat[j] -
            (truth.theta_C + truth.theta_I[j]))
               .squaredNorm();
  }
  return acc / (static_cast<double>(J - 1) * static_cast<double>(n));
}

/// DOI reconstruction error bound C * eps, where eps is the norm of the
/// noise on the difference measurements.
inline double doi_bound(double C, double eps) {
  if (!(C > 0.0)) throw invalid_params("doi_bound: C must be > 0");
  if (eps < 0.0) throw invalid_params("doi_bound: eps must be >= 0");
  return C * eps;
}

/// Texas DOI error floor 2 C sqrt(1 + delta_k) / sqrt(J) * eta.
inline double texas_doi_bound(double C, double delta_k, int J, double eta) {
  if (!(C > 0.0)) throw invalid_params("texas_doi_bound: C must be > 0");
  if (J < 1) throw invalid_params("texas_doi_bound: J must be >= 1");
  if (eta < 0.0) throw invalid_params("texas_doi_bound: eta must be >= 0");
  if (delta_k < 0.0 || delta_k >= 1.0)
    throw invalid_params("texas_doi_bound: delta_k must be in [0, 1)");
  return 2.0 * C * std::sqrt(1.0 + delta_k) * eta / std::sqrt(static_cast<double>(J));
}

/// || (1/J) sum_l A theta_I[l] ||_2 — the residual averaging noise left in
/// the common-component measurement estimate.
inline double averaging_noise(const Mat& A, const std::vector<Vec>& theta_I) {
  if (theta_I.empty()) throw dimension_mismatch("averaging_noise: no nodes");
  Vec mean = Vec::Zero(A.cols());
  for (const Vec& t : theta_I) {
    if (t.size() != A.cols())
      throw dimension_mismatch("averaging_noise: signal length mismatch");
    mean += t;
  }
  mean /= static_cast<double>(theta_I.size());
  return (A * mean).norm();
}

/// The BPDN stability constant adopted project-wide:
/// C = 4 sqrt(1 + delta) / (1 - (1 + sqrt(2)) delta), valid for
/// delta < sqrt(2) - 1; outside that regime the guarantee does not hold and
/// an invalid_regime error is raised.
inline double bpdn_constant(double delta) {
  if (delta < 0.0) throw invalid_params("bpdn_constant: delta must be >= 0");
  const double limit = std::sqrt(2.0) - 1.0;
  if (delta >= limit)
    throw invalid_regime("bpdn_constant: delta = " + std::to_string(delta) +
                         " is outside the guarantee regime [0, sqrt(2)-1)");
  return 4.0 * std::sqrt(1.0 + delta) / (1.0 - (1.0 + std::sqrt(2.0)) * delta);
}

/// Bit budget of one sweep point: (J-1) m R regular nodes plus the
/// side-information acquisition m1 R1.
struct RateBudget {
  int J = 0;
  int m = 0;   // measurements per non-SI node
  int R = 0;   // bits per measurement
  int m1 = 0;  // SI measurements
  int R1 = 0;  // SI bits per measurement
};

struct RateAccounting {
  std::uint64_t total_bits = 0;
  double m_prime = 0.0;  // equivalent per-node measurement count at rate R
  double delta_m = 0.0;  // m_prime - m
};

inline RateAccounting rate_accounting(const RateBudget& b) {
  if (b.J < 1 || b.m < 1 || b.R < 1 || b.m1 < 1 || b.R1 < 1)
    throw invalid_params("rate_accounting: all fields must be positive");
  RateAccounting out;
  out.total_bits = static_cast<std::uint64_t>(b.J - 1) *
                       static_cast<std::uint64_t>(b.m) *
                       static_cast<std::uint64_t>(b.R) +
                   static_cast<std::uint64_t>(b.m1) *
                       static_cast<std::uint64_t>(b.R1);
  out.m_prime = static_cast<double>(out.total_bits) /
                (static_cast<double>(b.J) * static_cast<double>(b.R));
  out.delta_m = out.m_prime - static_cast<double>(b.m);
  return out;
}

}  // namespace dcs

#endif  // DCS_ANALYSIS_HPP
