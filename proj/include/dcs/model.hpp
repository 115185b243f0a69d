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

#ifndef DCS_MODEL_HPP
#define DCS_MODEL_HPP

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "dcs/errors.hpp"
#include "dcs/rng.hpp"

namespace dcs {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Joint sparsity correlation model. JSM1 pairs a k_C-sparse common
/// component with sparse innovations; JSM3 makes the common component a
/// dense Gaussian vector (no k_C).
struct JsmModel {
  enum class Kind { Jsm1, Jsm3 };

  Kind kind = Kind::Jsm1;
  int k_C = 0;  // only meaningful under Jsm1

  static JsmModel jsm1(int common_sparsity) {
    return JsmModel{Kind::Jsm1, common_sparsity};
  }
  static JsmModel jsm3() { return JsmModel{Kind::Jsm3, 0}; }
};

enum class SupportPolicy { IndependentUniform, DisjointInnovations };

/// Amplitude policy for innovation components. EqualNorm rescales each
/// innovation to l2 norm eta (the Appendix assumption behind the Texas DOI
/// floor bound); GaussianAmplitudes leaves the raw standard-normal draws.
struct NormPolicy {
  enum class Kind { GaussianAmplitudes, EqualNorm };

  Kind kind = Kind::GaussianAmplitudes;
  double eta = 1.0;  // only meaningful under EqualNorm

  static NormPolicy gaussian() { return {}; }
  static NormPolicy equal_norm(double eta) {
    return NormPolicy{Kind::EqualNorm, eta};
  }
};

struct EnsembleParams {
  int n = 0;  // signal length
  int J = 0;  // number of nodes, >= 2
  JsmModel model;
  int k_I = 0;  // innovation sparsity per node
  SupportPolicy support_policy = SupportPolicy::IndependentUniform;
  NormPolicy norm_policy;
  std::uint64_t seed = 0;
};

/// One generated ensemble: theta_j = theta_C + theta_I[j]. Node indices are
/// 0-based throughout the library; node 0 is the side-information node.
struct SignalEnsemble {
  EnsembleParams params;
  Vec theta_C;
  std::vector<Vec> theta_I;
};

inline void validate(const EnsembleParams& p) {
  if (p.n < 1) throw invalid_params("ensemble: n must be >= 1");
  if (p.J < 2) throw invalid_params("ensemble: J must be >= 2");
  if (p.k_I < 0 || p.k_I > p.n)
    throw invalid_params("ensemble: require 0 <= k_I <= n");
  if (p.model.kind == JsmModel::Kind::Jsm1 &&
      (p.model.k_C < 0 || p.model.k_C > p.n))
    throw invalid_params("ensemble: require 0 <= k_C <= n");
  if (p.support_policy == SupportPolicy::DisjointInnovations &&
      static_cast<long long>(p.J) * p.k_I > p.n)
    throw invalid_params(
        "ensemble: disjoint innovations need J*k_I <= n (got " +
        std::to_string(static_cast<long long>(p.J) * p.k_I) + " > " +
        std::to_string(p.n) + ")");
  if (p.norm_policy.kind == NormPolicy::Kind::EqualNorm) {
    if (!(p.norm_policy.eta > 0.0))
      throw invalid_params("ensemble: equal-norm requires eta > 0");
    if (p.k_I == 0)
      throw invalid_params(
          "ensemble: equal-norm with k_I = 0 cannot reach a positive norm");
  }
}

namespace detail {

inline Vec sparse_gaussian(int n, const std::vector<int>& support, Rng& rng) {
  Vec v = Vec::Zero(n);
  for (int idx : support) v[idx] = rng.gaussian();
  return v;
}

}  // namespace detail

/// Draws a joint-sparse ensemble. Deterministic in params (including seed):
/// the draw order is common support, common amplitudes, then per node
/// support and amplitudes. Supports are uniform without replacement;
/// amplitudes i.i.d. standard Gaussian, rescaled per the norm policy.
inline SignalEnsemble gen_ensemble(const EnsembleParams& params) {
  validate(params);
  Rng rng(params.seed);
  SignalEnsemble e;
  e.params = params;

  const int n = params.n;
  if (params.model.kind == JsmModel::Kind::Jsm3) {
    e.theta_C = Vec::NullaryExpr(n, [&](Eigen::Index) { return rng.gaussian(); });
  } else {
    const auto support = rng.sample_indices(n, params.model.k_C);
    e.theta_C = detail::sparse_gaussian(n, support, rng);
  }

  std::vector<int> slots;  // disjoint mode: a permutation consumed in blocks
  if (params.support_policy == SupportPolicy::DisjointInnovations)
    slots = rng.permutation(n);

  e.theta_I.reserve(static_cast<std::size_t>(params.J));
  for (int j = 0; j < params.J; ++j) {
    std::vector<int> support;
    if (params.support_policy == SupportPolicy::DisjointInnovations) {
      support.assign(slots.begin() + static_cast<std::ptrdiff_t>(j) * params.k_I,
                     slots.begin() +
                         static_cast<std::ptrdiff_t>(j + 1) * params.k_I);
      std::sort(support.begin(), support.end());
    } else {
      support = rng.sample_indices(n, params.k_I);
    }
    Vec v = detail::sparse_gaussian(n, support, rng);
    if (params.norm_policy.kind == NormPolicy::Kind::EqualNorm) {
      const double norm = v.norm();
      if (!(norm > 0.0))
        throw invalid_params("ensemble: degenerate zero innovation draw");
      v *= params.norm_policy.eta / norm;
    }
    e.theta_I.push_back(std::move(v));
  }
  return e;
}

/// theta_C + theta_I[j], entrywise. j is 0-based, 0 <= j < J.
inline Vec node_signal(const SignalEnsemble& e, int j) {
  if (j < 0 || j >= static_cast<int>(e.theta_I.size()))
    throw invalid_params("node_signal: node index out of range");
  return e.theta_C + e.theta_I[static_cast<std::size_t>(j)];
}

}  // namespace dcs

#endif  // DCS_MODEL_HPP
