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

#ifndef DCS_RECOVERY_HPP
#define DCS_RECOVERY_HPP

#include <set>
#include <string>
#include <vector>

#include "dcs/errors.hpp"
#include "dcs/recovery_types.hpp"
#include "dcs/sensing.hpp"
#include "dcs/solver.hpp"

namespace dcs {

namespace detail {

inline NodeDiagnostics make_diag(const SolveResult& r) {
  return NodeDiagnostics{true, r.converged, r.iterations, r.residual_norm};
}

inline void check_measurements(const BpdnSolver& solver,
                               const MeasurementSet& measurements) {
  if (measurements.y.empty())
    throw dimension_mismatch("recovery: empty measurement set");
  for (const Vec& y : measurements.y)
    if (y.size() != solver.matrix().rows())
      throw dimension_mismatch("recovery: measurement length mismatch");
}

inline void check_side_information(const BpdnSolver& solver,
                                   const SideInformation& si) {
  if (si.theta_1.size() != solver.matrix().cols() ||
      si.y_1.size() != solver.matrix().rows())
    throw invalid_params("recovery: missing or malformed side information");
}

inline Vec mean_measurement(const MeasurementSet& measurements) {
  Vec acc = Vec::Zero(measurements.y.front().size());
  for (const Vec& y : measurements.y) acc += y;
  return acc / static_cast<double>(measurements.y.size());
}

}  // namespace detail

/// Independent per-node CS decoding; the no-cooperation baseline.
inline EnsembleRecovery recover_separate(const BpdnSolver& solver,
                                         const MeasurementSet& measurements,
                                         double eps_per_node) {
  detail::check_measurements(solver, measurements);
  EnsembleRecovery out;
  for (const Vec& y : measurements.y) {
    const SolveResult r = solver.solve(y, eps_per_node);
    out.theta_hat.push_back(r.theta_hat);
    out.per_node.push_back(detail::make_diag(r));
  }
  return out;
}

/// Difference-Of-Innovations. For each node j >= 1 the side-information
/// measurements are subtracted, which cancels the common component exactly
/// (sparse or dense), and the innovation difference is recovered:
///   y_diff = y_j - y_1;  theta_hat_j = theta_1 + bpdn(y_diff).
/// Node 0 passes through the side information unchanged.
inline EnsembleRecovery recover_doi(const BpdnSolver& solver,
                                    const MeasurementSet& measurements,
                                    const SideInformation& si, double eps) {
  detail::check_measurements(solver, measurements);
  detail::check_side_information(solver, si);
  EnsembleRecovery out;
  out.theta_hat.push_back(si.theta_1);
  out.per_node.push_back(NodeDiagnostics{});
  for (std::size_t j = 1; j < measurements.y.size(); ++j) {
    const Vec y_diff = measurements.y[j] - si.y_1;
    const SolveResult r = solver.solve(y_diff, eps);
    out.theta_hat.push_back(si.theta_1 + r.theta_hat);
    out.per_node.push_back(detail::make_diag(r));
  }
  return out;
}

/// Texas DOI. Averaging all nodes' measurements estimates the measurements
/// of the common component; subtracting it from the side-information
/// measurements yields measurements of the node-0 innovation, and each
/// remaining node only ever solves for a single innovation component:
///   y_hat_C   = (1/J) sum_j y_j
///   y_hat_I1  = y_1 - y_hat_C,            theta_hat_I1 = bpdn(y_hat_I1)
///   y_hat_Ij  = (y_j - y_1) + y_hat_I1,   theta_hat_Ij = bpdn(y_hat_Ij)
///   theta_hat_j = theta_1 - theta_hat_I1 + theta_hat_Ij
/// The common component is never reconstructed explicitly.
inline EnsembleRecovery recover_texas_doi(const BpdnSolver& solver,
                                          const MeasurementSet& measurements,
                                          const SideInformation& si,
                                          double eps_inner) {
  detail::check_measurements(solver, measurements);
  detail::check_side_information(solver, si);
  if (measurements.y.size() < 2)
    throw invalid_params("texas_doi: need J >= 2");

  const Vec y_hat_C = detail::mean_measurement(measurements);
  const Vec y_hat_I1 = si.y_1 - y_hat_C;
  const SolveResult first = solver.solve(y_hat_I1, eps_inner);
  const Vec base = si.theta_1 - first.theta_hat;

  EnsembleRecovery out;
  out.shared_solves.push_back(detail::make_diag(first));
  out.theta_hat.push_back(si.theta_1);
  out.per_node.push_back(NodeDiagnostics{});
  for (std::size_t j = 1; j < measurements.y.size(); ++j) {
    const Vec y_hat_Ij = (measurements.y[j] - si.y_1) + y_hat_I1;
    const SolveResult r = solver.solve(y_hat_Ij, eps_inner);
    out.theta_hat.push_back(base + r.theta_hat);
    out.per_node.push_back(detail::make_diag(r));
  }
  return out;
}

/// Texas Hold 'Em baseline (all measurements treated as community
/// measurements): recover the common component from the measurement
/// average, subtract, recover each innovation, add back. No side
/// information is used.
inline EnsembleRecovery recover_texas_holdem(const BpdnSolver& solver,
                                             const MeasurementSet& measurements,
                                             double eps_inner) {
  detail::check_measurements(solver, measurements);
  if (measurements.y.size() < 2)
    throw invalid_params("texas_holdem: need J >= 2");

  const Vec y_hat_C = detail::mean_measurement(measurements);
  const SolveResult common = solver.solve(y_hat_C, eps_inner);

  EnsembleRecovery out;
  out.shared_solves.push_back(detail::make_diag(common));
  for (const Vec& y : measurements.y) {
    const SolveResult r = solver.solve(y - y_hat_C, eps_inner);
    out.theta_hat.push_back(common.theta_hat + r.theta_hat);
    out.per_node.push_back(detail::make_diag(r));
  }
  return out;
}

/// TECC baseline for JSM-3: the dense common component is estimated by the
/// transpose estimator over all nodes' measurements (consistent thanks to
/// the unit-norm-column convention), then innovations are recovered per
/// node after cancelling its measurements:
///   x_hat_C = (1/J) sum_j Phi_j^T y_j
///   theta_hat_j = x_hat_C + bpdn(Phi_j, y_j - Phi_j x_hat_C).
/// Requires pairwise distinct sensing matrices.
inline EnsembleRecovery recover_tecc(const std::vector<SensingMatrix>& matrices,
                                     const MeasurementSet& measurements,
                                     double eps_inner,
                                     const SolverConfig& cfg = {}) {
  const std::size_t J = matrices.size();
  if (J < 2) throw invalid_params("tecc: need J >= 2 nodes");
  if (measurements.y.size() != J)
    throw dimension_mismatch("tecc: matrices/measurements count mismatch");
  std::set<std::uint64_t> seeds;
  for (const auto& Phi : matrices) seeds.insert(Phi.seed);
  if (seeds.size() != J)
    throw shared_matrix_error(
        seeds.size() == 1
            ? "tecc: all nodes share one sensing matrix"
            : "tecc: duplicated sensing-matrix seeds");
  const int m = matrices.front().m, n = matrices.front().n;
  for (std::size_t j = 0; j < J; ++j) {
    if (matrices[j].m != m || matrices[j].n != n)
      throw dimension_mismatch("tecc: inconsistent matrix shapes");
    if (measurements.y[j].size() != m)
      throw dimension_mismatch("tecc: measurement length mismatch");
  }

  Vec x_hat_C = Vec::Zero(n);
  for (std::size_t j = 0; j < J; ++j)
    x_hat_C += matrices[j].entries.transpose() * measurements.y[j];
  x_hat_C /= static_cast<double>(J);

  EnsembleRecovery out;
  for (std::size_t j = 0; j < J; ++j) {
    BpdnSolver solver(matrices[j].entries, cfg);
    const Vec y_inn = measurements.y[j] - matrices[j].entries * x_hat_C;
    const SolveResult r = solver.solve(y_inn, eps_inner);
    out.theta_hat.push_back(x_hat_C + r.theta_hat);
    out.per_node.push_back(detail::make_diag(r));
  }
  return out;
}

/// Convenience overloads building the solver in place.
inline EnsembleRecovery recover_separate(const Mat& A,
                                         const MeasurementSet& measurements,
                                         double eps_per_node,
                                         const SolverConfig& cfg = {}) {
  return recover_separate(BpdnSolver(A, cfg), measurements, eps_per_node);
}
inline EnsembleRecovery recover_doi(const Mat& A,
                                    const MeasurementSet& measurements,
                                    const SideInformation& si, double eps,
                                    const SolverConfig& cfg = {}) {
  return recover_doi(BpdnSolver(A, cfg), measurements, si, eps);
}
inline EnsembleRecovery recover_texas_doi(const Mat& A,
                                          const MeasurementSet& measurements,
                                          const SideInformation& si,
                                          double eps_inner,
                                          const SolverConfig& cfg = {}) {
  return recover_texas_doi(BpdnSolver(A, cfg), measurements, si, eps_inner);
}
inline EnsembleRecovery recover_texas_holdem(const Mat& A,
                                             const MeasurementSet& measurements,
                                             double eps_inner,
                                             const SolverConfig& cfg = {}) {
  return recover_texas_holdem(BpdnSolver(A, cfg), measurements, eps_inner);
}

}  // namespace dcs

#endif  // DCS_RECOVERY_HPP
