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

#ifndef DCS_SOLVER_HPP
#define DCS_SOLVER_HPP

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/QR>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dcs/errors.hpp"
#include "dcs/model.hpp"

namespace dcs {

struct SolverConfig {
  double rho = 1.0;       // initial ADMM penalty
  double abs_tol = 1e-7;
  double rel_tol = 1e-5;
  int max_iter = 10000;
};

inline void validate(const SolverConfig& cfg) {
  if (cfg.max_iter < 1) throw invalid_params("solver: max_iter must be >= 1");
  if (!(cfg.rho > 0.0)) throw invalid_params("solver: rho must be > 0");
  if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0))
    throw invalid_params("solver: tolerances must be > 0");
}

struct SolveResult {
  Vec theta_hat;
  int iterations = 0;
  bool converged = false;
  double residual_norm = 0.0;  // ||A theta_hat - y||_2
};

/// Quadratically constrained basis pursuit:
///
///   minimize ||theta||_1  subject to  ||A theta - y||_2 <= eps
///
/// solved by ADMM on the splitting {theta} vs {z, w} with constraints
/// theta = z and A theta = w, where z absorbs the l1 term (soft threshold)
/// and w the ball constraint (Euclidean projection onto the radius-eps ball
/// around y; eps = 0 degenerates to equality-constrained basis pursuit).
///
/// The theta step solves (I + A^T A) theta = rhs. Both constraint blocks
/// share the penalty, so the system matrix is rho-independent: one Cholesky
/// factorization per matrix serves every solve and every penalty rescaling.
/// For m < n it is applied through the m x m form (I + A A^T) via the
/// Woodbury identity. Construct once, then solve() is const and safe to
/// call from concurrent threads.
class BpdnSolver {
 public:
  explicit BpdnSolver(Mat A, SolverConfig cfg = {})
      : A_(std::move(A)), cfg_(cfg) {
    validate(cfg_);
    const Eigen::Index m = A_.rows(), n = A_.cols();
    if (m < 1 || n < 1) throw dimension_mismatch("bpdn: empty matrix");
    if (!A_.allFinite()) throw invalid_params("bpdn: non-finite matrix entry");
    dual_form_ = m < n;
    Mat gram;
    if (dual_form_) {
      gram = Mat::Identity(m, m);
      gram.noalias() += A_ * A_.transpose();
    } else {
      gram = Mat::Identity(n, n);
      gram.noalias() += A_.transpose() * A_;
    }
    llt_.compute(gram);
    if (llt_.info() != Eigen::Success)
      throw invalid_params("bpdn: factorization failed");
  }

  const Mat& matrix() const { return A_; }
  const SolverConfig& config() const { return cfg_; }

  SolveResult solve(const Vec& y, double eps) const {
    const Eigen::Index m = A_.rows(), n = A_.cols();
    if (y.size() != m)
      throw dimension_mismatch("bpdn: y has length " + std::to_string(y.size()) +
                               ", expected " + std::to_string(m));
    if (!y.allFinite() || !std::isfinite(eps))
      throw invalid_params("bpdn: non-finite input");
    if (eps < 0.0) throw invalid_params("bpdn: eps must be >= 0");

    SolveResult res;
    if (y.norm() <= eps) {  // zero is feasible and l1-minimal
      res.theta_hat = Vec::Zero(n);
      res.converged = true;
      res.residual_norm = y.norm();
      return res;
    }

    // Fixed over-relaxation plus residual-balancing penalty adaptation;
    // the factorization is penalty-free so rescaling costs nothing.
    constexpr double kRelax = 1.7;
    constexpr int kCheckEvery = 10;

    double rho = cfg_.rho;
    Vec z = Vec::Zero(n), u = Vec::Zero(n);
    Vec w = y, v = Vec::Zero(m);
    Vec theta(n), a_theta(m), rhs(n), z_prev(n), w_prev(m);

    const double sqrt_nm = std::sqrt(static_cast<double>(n + m));
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    for (int it = 1; it <= cfg_.max_iter; ++it) {
      rhs = (z - u) + A_.transpose() * (w - v);
      if (dual_form_) {
        theta = rhs - A_.transpose() * llt_.solve(A_ * rhs);
      } else {
        theta = llt_.solve(rhs);
      }
      a_theta.noalias() = A_ * theta;

      z_prev.swap(z);
      w_prev.swap(w);

      // relaxed iterates feed the z/w/dual updates
      const double kappa = 1.0 / rho;
      Vec theta_r = kRelax * theta + (1.0 - kRelax) * z_prev;
      Vec a_theta_r = kRelax * a_theta + (1.0 - kRelax) * w_prev;

      z = (theta_r + u).unaryExpr([kappa](double t) {
        return t > kappa ? t - kappa : (t < -kappa ? t + kappa : 0.0);
      });
      Vec d = a_theta_r + v - y;
      const double dn = d.norm();
      if (dn <= eps) {
        w = a_theta_r + v;
      } else if (eps > 0.0) {
        w = y + (eps / dn) * d;
      } else {
        w = y;
      }
      u += theta_r - z;
      v += a_theta_r - w;

      if (it % kCheckEvery == 0 || it == cfg_.max_iter) {
        const double r_norm = std::sqrt((theta - z).squaredNorm() +
                                        (a_theta - w).squaredNorm());
        Vec dz = (z - z_prev) + A_.transpose() * (w - w_prev);
        const double s_norm = rho * dz.norm();
        const double pri_scale =
            std::max(std::sqrt(theta.squaredNorm() + a_theta.squaredNorm()),
                     std::sqrt(z.squaredNorm() + w.squaredNorm()));
        const double eps_pri = sqrt_nm * cfg_.abs_tol + cfg_.rel_tol * pri_scale;
        Vec dual_vec = u + A_.transpose() * v;
        const double eps_dual =
            sqrt_n * cfg_.abs_tol + cfg_.rel_tol * rho * dual_vec.norm();

        if (r_norm <= eps_pri && s_norm <= eps_dual) {
          const double feas = (A_ * z - y).norm();
          if (feas <= eps + cfg_.abs_tol) {
            res.theta_hat = z;
            res.iterations = it;
            res.converged = true;
            res.residual_norm = feas;
            return res;
          }
        }

        if (r_norm > 10.0 * s_norm && rho < 1e6) {
          rho *= 2.0;
          u *= 0.5;
          v *= 0.5;
        } else if (s_norm > 10.0 * r_norm && rho > 1e-6) {
          rho *= 0.5;
          u *= 2.0;
          v *= 2.0;
        }
      }
    }

    res.theta_hat = z;
    res.iterations = cfg_.max_iter;
    res.converged = false;
    res.residual_norm = (A_ * z - y).norm();
    return res;
  }

 private:
  Mat A_;
  SolverConfig cfg_;
  bool dual_form_ = false;
  Eigen::LLT<Mat> llt_;
};

/// One-shot convenience wrapper; builds the factorization for a single solve.
inline SolveResult solve_bpdn(const Mat& A, const Vec& y, double eps,
                              const SolverConfig& cfg = {}) {
  return BpdnSolver(A, cfg).solve(y, eps);
}

namespace detail {

inline std::uint64_t binomial_capped(int n, int k, std::uint64_t cap) {
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<std::uint64_t>(n - i + 1) / static_cast<std::uint64_t>(i);
    if (c > cap) return cap + 1;
  }
  return c;
}

}  // namespace detail

/// Exhaustive l0 minimization for toy instances: enumerates every support of
/// size <= k_max in (size, lexicographic) order, solves least squares on each,
/// and keeps the first support attaining the minimal residual. The
/// enumeration order implements the tie-breaking rule (smaller support first,
/// then lexicographically smallest). Guarded to n <= 20 and at most 1e6
/// candidate supports.
inline Vec l0_oracle(const Mat& A, const Vec& y, int k_max) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (y.size() != m) throw dimension_mismatch("l0_oracle: dimension mismatch");
  if (k_max < 0 || k_max > n) throw invalid_params("l0_oracle: bad k_max");
  if (n > 20) throw instance_too_large("l0_oracle: n > 20");
  std::uint64_t total = 0;
  for (int s = 0; s <= k_max; ++s) {
    total += detail::binomial_capped(n, s, 1000000);
    if (total > 1000000)
      throw instance_too_large("l0_oracle: more than 1e6 supports");
  }

  Vec best = Vec::Zero(n);
  double best_res = y.squaredNorm();  // empty support
  const double tie_eps = 1e-12 * (1.0 + best_res);

  std::vector<int> supp;
  for (int s = 1; s <= k_max; ++s) {
    supp.resize(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) supp[static_cast<std::size_t>(i)] = i;
    while (true) {
      Mat sub(m, s);
      for (int i = 0; i < s; ++i)
        sub.col(i) = A.col(supp[static_cast<std::size_t>(i)]);
      const Vec coef = sub.colPivHouseholderQr().solve(y);
      const double res = (sub * coef - y).squaredNorm();
      if (res < best_res - tie_eps) {
        best_res = res;
        best.setZero();
        for (int i = 0; i < s; ++i)
          best[supp[static_cast<std::size_t>(i)]] = coef[i];
      }
      // next lexicographic s-combination of [0, n)
      int i = s - 1;
      while (i >= 0 && supp[static_cast<std::size_t>(i)] == n - s + i) --i;
      if (i < 0) break;
      ++supp[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < s; ++j)
        supp[static_cast<std::size_t>(j)] = supp[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return best;
}

}  // namespace dcs

#endif  // DCS_SOLVER_HPP
