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

#ifndef DCS_HARNESS_HPP
#define DCS_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "dcs/analysis.hpp"
#include "dcs/errors.hpp"
#include "dcs/model.hpp"
#include "dcs/recovery.hpp"
#include "dcs/sensing.hpp"
#include "dcs/solver.hpp"

namespace dcs {

enum class Algorithm { Separate, Doi, TexasDoi, TexasHoldem, Tecc };

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Separate: return "separate";
    case Algorithm::Doi: return "doi";
    case Algorithm::TexasDoi: return "texas_doi";
    case Algorithm::TexasHoldem: return "texas_holdem";
    case Algorithm::Tecc: return "tecc";
  }
  return "?";
}

inline Algorithm algorithm_from_string(const std::string& s) {
  if (s == "separate") return Algorithm::Separate;
  if (s == "doi") return Algorithm::Doi;
  if (s == "texas_doi") return Algorithm::TexasDoi;
  if (s == "texas_holdem") return Algorithm::TexasHoldem;
  if (s == "tecc") return Algorithm::Tecc;
  throw invalid_config("unknown algorithm name: " + s);
}

/// Optional per-algorithm overrides of the inner BPDN radius; unset entries
/// fall back to the built-in noise-model defaults.
struct EpsilonOverrides {
  std::optional<double> separate, doi, texas_doi, texas_holdem, tecc;
};

struct SiBudget {
  int m1 = 0;
  int R1 = 0;
};

/// Declarative description of one benchmark sweep.
struct ExperimentConfig {
  JsmModel model;
  int n = 0;
  int J = 0;
  int k_I = 0;
  std::vector<int> m_values;
  int R = 0;  // bits per measurement; 0 = unquantized
  int trials = 1;
  std::uint64_t base_seed = 0;
  std::vector<Algorithm> algorithms;
  SupportPolicy support_policy = SupportPolicy::IndependentUniform;
  NormPolicy norm_policy;
  SolverConfig solver;
  std::optional<SiBudget> si_budget;
  EpsilonOverrides epsilon;
  std::string output_path = "results";
};

struct ResultRow {
  std::string algorithm;
  int m = 0;
  int J = 0;
  int R = 0;
  int trial = 0;
  double mse = 0.0;
  double mean_relative_error = 0.0;
  double converged_fraction = 1.0;
  double wall_time = 0.0;  // seconds; excluded from determinism contracts
};

inline void validate(const ExperimentConfig& c) {
  if (c.n < 1) throw invalid_config("config: n must be >= 1");
  if (c.J < 2) throw invalid_config("config: J must be >= 2");
  if (c.k_I < 0 || c.k_I > c.n) throw invalid_config("config: 0 <= k_I <= n");
  if (c.model.kind == JsmModel::Kind::Jsm1 &&
      (c.model.k_C < 0 || c.model.k_C > c.n))
    throw invalid_config("config: 0 <= k_C <= n");
  if (c.m_values.empty()) throw invalid_config("config: m_values is empty");
  for (int m : c.m_values)
    if (m < 1 || m > c.n)
      throw invalid_config("config: every m must satisfy 1 <= m <= n");
  if (c.R < 0) throw invalid_config("config: R must be >= 0");
  if (c.R > 56) throw invalid_config("config: R must be <= 56");
  if (c.trials < 1) throw invalid_config("config: trials must be >= 1");
  if (c.algorithms.empty()) throw invalid_config("config: no algorithms selected");
  std::set<Algorithm> uniq(c.algorithms.begin(), c.algorithms.end());
  if (uniq.size() != c.algorithms.size())
    throw invalid_config("config: duplicate algorithm entries");
  if (c.support_policy == SupportPolicy::DisjointInnovations &&
      static_cast<long long>(c.J) * c.k_I > c.n)
    throw invalid_config(
        "config: disjoint innovations need J*k_I <= n (got " +
        std::to_string(static_cast<long long>(c.J) * c.k_I) + " > " +
        std::to_string(c.n) + ")");
  if (c.norm_policy.kind == NormPolicy::Kind::EqualNorm) {
    if (!(c.norm_policy.eta > 0.0))
      throw invalid_config("config: equal-norm requires eta > 0");
    if (c.k_I == 0)
      throw invalid_config("config: equal-norm requires k_I >= 1");
  }
  if (uniq.count(Algorithm::Tecc) && c.model.kind != JsmModel::Kind::Jsm3)
    throw invalid_config("config: tecc requires the jsm3 model");
  if (c.si_budget && (c.si_budget->m1 < 1 || c.si_budget->R1 < 1))
    throw invalid_config("config: si_budget fields must be positive");
  if (c.si_budget && c.si_budget->R1 > 56)
    throw invalid_config("config: R1 must be <= 56");
  validate(c.solver);
}

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    const std::string model = j.at("model").get<std::string>();
    if (model == "jsm1")
      c.model = JsmModel::jsm1(j.at("k_C").get<int>());
    else if (model == "jsm3")
      c.model = JsmModel::jsm3();
    else
      throw invalid_config("config: model must be \"jsm1\" or \"jsm3\"");
    c.n = j.at("n").get<int>();
    c.J = j.at("J").get<int>();
    c.k_I = j.at("k_I").get<int>();
    c.m_values = j.at("m_values").get<std::vector<int>>();
    c.R = j.value("R", 0);
    c.trials = j.at("trials").get<int>();
    c.base_seed = j.value("base_seed", std::uint64_t{0});
    for (const auto& name : j.at("algorithms"))
      c.algorithms.push_back(algorithm_from_string(name.get<std::string>()));
    const std::string support = j.value("support_policy", "independent-uniform");
    if (support == "independent-uniform")
      c.support_policy = SupportPolicy::IndependentUniform;
    else if (support == "disjoint-innovations")
      c.support_policy = SupportPolicy::DisjointInnovations;
    else
      throw invalid_config("config: unknown support_policy: " + support);
    const std::string norm = j.value("norm_policy", "gaussian-amplitudes");
    if (norm == "gaussian-amplitudes")
      c.norm_policy = NormPolicy::gaussian();
    else if (norm == "equal-norm")
      c.norm_policy = NormPolicy::equal_norm(j.value("eta", 1.0));
    else
      throw invalid_config("config: unknown norm_policy: " + norm);
    if (j.contains("solver")) {
      const auto& s = j.at("solver");
      c.solver.rho = s.value("rho", c.solver.rho);
      c.solver.abs_tol = s.value("abs_tol", c.solver.abs_tol);
      c.solver.rel_tol = s.value("rel_tol", c.solver.rel_tol);
      c.solver.max_iter = s.value("max_iter", c.solver.max_iter);
    }
    if (j.contains("si_budget")) {
      SiBudget b;
      b.m1 = j.at("si_budget").at("m1").get<int>();
      b.R1 = j.at("si_budget").at("R1").get<int>();
      c.si_budget = b;
    }
    if (j.contains("epsilon")) {
      const auto& e = j.at("epsilon");
      auto get = [&](const char* key) -> std::optional<double> {
        if (e.contains(key)) return e.at(key).get<double>();
        return std::nullopt;
      };
      c.epsilon.separate = get("separate");
      c.epsilon.doi = get("doi");
      c.epsilon.texas_doi = get("texas_doi");
      c.epsilon.texas_holdem = get("texas_holdem");
      c.epsilon.tecc = get("tecc");
    }
    c.output_path = j.value("output_path", c.output_path);
  } catch (const nlohmann::json::exception& ex) {
    throw invalid_config(std::string("config: ") + ex.what());
  }
  validate(c);
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_config("config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw invalid_config(std::string("config: parse error: ") + ex.what());
  }
  return parse_config(j);
}

/// DCS_LAB_SEED, when set, overrides base_seed. Returns true if applied.
inline bool apply_env_seed_override(ExperimentConfig& c) {
  const char* env = std::getenv("DCS_LAB_SEED");
  if (env == nullptr || *env == '\0') return false;
  char* end = nullptr;
  const std::uint64_t v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0')
    throw invalid_config("DCS_LAB_SEED is not an unsigned integer");
  c.base_seed = v;
  return true;
}

/// Splittable per-cell seed: base_seed XOR hash(trial, m).
inline std::uint64_t cell_seed(std::uint64_t base_seed, int trial, int m) {
  return base_seed ^ derive_seed(0, static_cast<std::uint64_t>(trial),
                                 static_cast<std::uint64_t>(m));
}

namespace detail {

// sub-stream tags within one (trial, m) cell
inline constexpr std::uint64_t kTagEnsemble = 1;
inline constexpr std::uint64_t kTagSharedMatrix = 2;
inline constexpr std::uint64_t kTagTeccMatrix = 3;
inline constexpr std::uint64_t kTagRip = 4;

struct CellInputs {
  SignalEnsemble ensemble;
  std::vector<Vec> signals;
  std::optional<SensingMatrix> shared;     // separate/doi/texas*/holdem
  std::vector<SensingMatrix> tecc;         // tecc only
  MeasurementSet shared_set;
  MeasurementSet tecc_set;
  SideInformation si;
  double step_R = 0.0;   // quantizer step at rate R (0 when unquantized)
  double step_R1 = 0.0;  // step at the SI rate (equals step_R without budget)
  double step_tecc = 0.0;
};

inline bool needs_shared(const ExperimentConfig& c) {
  for (Algorithm a : c.algorithms)
    if (a != Algorithm::Tecc) return true;
  return false;
}

inline bool needs_tecc(const ExperimentConfig& c) {
  for (Algorithm a : c.algorithms)
    if (a == Algorithm::Tecc) return true;
  return false;
}

inline Vec quantize_roundtrip(const Vec& y, const Quantizer& q) {
  return dequantize(quantize(y, q), q);
}

inline CellInputs build_cell(const ExperimentConfig& c, int trial, int m) {
  const std::uint64_t seed = cell_seed(c.base_seed, trial, m);
  CellInputs cell;

  EnsembleParams params;
  params.n = c.n;
  params.J = c.J;
  params.model = c.model;
  params.k_I = c.k_I;
  params.support_policy = c.support_policy;
  params.norm_policy = c.norm_policy;
  params.seed = derive_seed(seed, kTagEnsemble);
  cell.ensemble = gen_ensemble(params);

  cell.signals.reserve(static_cast<std::size_t>(c.J));
  for (int j = 0; j < c.J; ++j) cell.signals.push_back(node_signal(cell.ensemble, j));

  if (needs_shared(c)) {
    cell.shared = gen_matrix(m, c.n, derive_seed(seed, kTagSharedMatrix));
    for (int j = 0; j < c.J; ++j)
      cell.shared_set.y.push_back(measure(*cell.shared, cell.signals[static_cast<std::size_t>(j)]));
  }
  if (needs_tecc(c)) {
    std::set<std::uint64_t> used;
    for (int j = 0; j < c.J; ++j) {
      std::uint64_t s = derive_seed(seed, kTagTeccMatrix, static_cast<std::uint64_t>(j));
      while (!used.insert(s).second) ++s;  // force pairwise-distinct seeds
      cell.tecc.push_back(gen_matrix(m, c.n, s));
      cell.tecc_set.y.push_back(
          measure(cell.tecc.back(), cell.signals[static_cast<std::size_t>(j)]));
    }
  }

  if (c.R > 0) {
    auto scale_of = [](const std::vector<Vec>& ys) {
      double s = 0.0;
      for (const Vec& y : ys) s = std::max(s, y.lpNorm<Eigen::Infinity>());
      return s > 0.0 ? s : 1.0;  // keep the quantizer well-formed on all-zero data
    };
    if (!cell.shared_set.y.empty()) {
      const Quantizer q{c.R, scale_of(cell.shared_set.y)};
      const int R1 = c.si_budget ? c.si_budget->R1 : c.R;
      const Quantizer q1{R1, q.S};
      cell.step_R = q.step();
      cell.step_R1 = q1.step();
      cell.shared_set.y[0] = quantize_roundtrip(cell.shared_set.y[0], q1);
      for (std::size_t j = 1; j < cell.shared_set.y.size(); ++j)
        cell.shared_set.y[j] = quantize_roundtrip(cell.shared_set.y[j], q);
      cell.shared_set.quantized = true;
      cell.shared_set.quantizer = q;
    }
    if (!cell.tecc_set.y.empty()) {
      const Quantizer q{c.R, scale_of(cell.tecc_set.y)};
      cell.step_tecc = q.step();
      for (Vec& y : cell.tecc_set.y) y = quantize_roundtrip(y, q);
      cell.tecc_set.quantized = true;
      cell.tecc_set.quantizer = q;
    }
  }

  if (!cell.shared_set.y.empty())
    cell.si = SideInformation{cell.signals[0], cell.shared_set.y[0]};
  return cell;
}

/// Default inner radii per algorithm; see README for the noise model.
struct EpsilonPolicy {
  double separate = 0.0;
  double doi = 0.0;
  double texas = 0.0;
  double holdem = 0.0;
  double tecc = 0.0;
};

inline EpsilonPolicy default_epsilons(const ExperimentConfig& c, const CellInputs& cell,
                                      int m, std::uint64_t seed) {
  EpsilonPolicy eps;
  const double sqrt_m = std::sqrt(static_cast<double>(m));
  const double eps_quant = cell.step_R * sqrt_m / 2.0;
  eps.separate = eps_quant;
  eps.doi = std::sqrt(cell.step_R * cell.step_R + cell.step_R1 * cell.step_R1) *
            sqrt_m / 2.0;

  double eta_hat = 0.0;
  if (c.k_I > 0)
    eta_hat = c.norm_policy.kind == NormPolicy::Kind::EqualNorm
                  ? c.norm_policy.eta
                  : std::sqrt(static_cast<double>(c.k_I));
  double floor_term = 0.0;
  if (eta_hat > 0.0 && cell.shared) {
    const int k_C = c.model.kind == JsmModel::Kind::Jsm1 ? c.model.k_C : 0;
    const int k = std::min(c.n, std::max(1, k_C + 2 * c.k_I));
    const double delta =
        estimate_rip(*cell.shared, k, 1024, derive_seed(seed, kTagRip));
    floor_term = std::sqrt(1.0 + delta) * eta_hat /
                 std::sqrt(static_cast<double>(c.J));
  }
  eps.texas = floor_term + eps_quant;
  eps.holdem = floor_term + eps_quant;

  if (!cell.tecc.empty()) {
    Vec x_hat_C = Vec::Zero(c.n);
    for (std::size_t j = 0; j < cell.tecc.size(); ++j)
      x_hat_C += cell.tecc[j].entries.transpose() * cell.tecc_set.y[j];
    x_hat_C /= static_cast<double>(cell.tecc.size());
    eps.tecc = x_hat_C.norm() *
                   std::sqrt(static_cast<double>(c.n) /
                             (static_cast<double>(m) * static_cast<double>(c.J))) +
               cell.step_tecc * sqrt_m / 2.0;
  }

  eps.separate = c.epsilon.separate.value_or(eps.separate);
  eps.doi = c.epsilon.doi.value_or(eps.doi);
  eps.texas = c.epsilon.texas_doi.value_or(eps.texas);
  eps.holdem = c.epsilon.texas_holdem.value_or(eps.holdem);
  eps.tecc = c.epsilon.tecc.value_or(eps.tecc);
  return eps;
}

inline double mean_relative_error(const EnsembleRecovery& rec,
                                  const std::vector<Vec>& signals) {
  double acc = 0.0;
  int count = 0;
  for (std::size_t j = 1; j < signals.size(); ++j) {
    const double err = (rec.theta_hat[j] - signals[j]).norm();
    const double ref = signals[j].norm();
    if (ref > 0.0)
      acc += err / ref;
    else if (err > 1e-12)
      return std::numeric_limits<double>::infinity();
    ++count;
  }
  return count > 0 ? acc / count : 0.0;
}

}  // namespace detail

/// Executes the declared sweep: for every (m, trial) cell a fresh seeded
/// ensemble and matrix set is generated, every selected algorithm consumes
/// the identical inputs, and one ResultRow per (algorithm, m, trial) comes
/// back in canonical order (algorithm, m, trial). Deterministic given the
/// config, independent of `threads`.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& config,
                                             int threads = 1) {
  validate(config);

  struct CellTask {
    int m = 0;
    int trial = 0;
  };
  std::vector<CellTask> tasks;
  for (int m : config.m_values)
    for (int t = 0; t < config.trials; ++t) tasks.push_back({m, t});

  const std::size_t algs = config.algorithms.size();
  std::vector<ResultRow> rows(tasks.size() * algs);

  auto run_cell = [&](std::size_t task_idx) {
    const CellTask task = tasks[task_idx];
    const auto cell = detail::build_cell(config, task.trial, task.m);
    const auto eps = detail::default_epsilons(
        config, cell, task.m, cell_seed(config.base_seed, task.trial, task.m));

    std::optional<BpdnSolver> shared_solver;
    if (cell.shared) shared_solver.emplace(cell.shared->entries, config.solver);

    for (std::size_t a = 0; a < algs; ++a) {
      const Algorithm alg = config.algorithms[a];
      const auto t0 = std::chrono::steady_clock::now();
      EnsembleRecovery rec;
      switch (alg) {
        case Algorithm::Separate:
          rec = recover_separate(*shared_solver, cell.shared_set, eps.separate);
          break;
        case Algorithm::Doi:
          rec = recover_doi(*shared_solver, cell.shared_set, cell.si, eps.doi);
          break;
        case Algorithm::TexasDoi:
          rec = recover_texas_doi(*shared_solver, cell.shared_set, cell.si,
                                  eps.texas);
          break;
        case Algorithm::TexasHoldem:
          rec = recover_texas_holdem(*shared_solver, cell.shared_set, eps.holdem);
          break;
        case Algorithm::Tecc:
          rec = recover_tecc(cell.tecc, cell.tecc_set, eps.tecc, config.solver);
          break;
      }
      const double dt =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();

      ResultRow row;
      row.algorithm = to_string(alg);
      row.m = task.m;
      row.J = config.J;
      row.R = config.R;
      row.trial = task.trial;
      row.mse = ensemble_mse(rec, cell.ensemble);
      row.mean_relative_error = detail::mean_relative_error(rec, cell.signals);
      row.converged_fraction = rec.converged_fraction();
      row.wall_time = dt;
      rows[task_idx * algs + a] = std::move(row);
    }
  };

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(tasks.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next.fetch_add(1); i < tasks.size();
               i = next.fetch_add(1))
            run_cell(i);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.algorithm != b.algorithm) return a.algorithm < b.algorithm;
    if (a.m != b.m) return a.m < b.m;
    return a.trial < b.trial;
  });
  return rows;
}

/// CSV with the canonical header. With deterministic=true the wall_time
/// column is written as 0 so two runs of the same config diff byte-for-byte.
inline void export_csv(const std::vector<ResultRow>& rows, const std::string& path,
                       bool deterministic = false) {
  if (rows.empty()) throw invalid_params("export_csv: no rows");
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io_error("export_csv: unwritable path " + path);
  out << "algorithm,m,J,R,trial,mse,mean_relative_error,converged_fraction,wall_time\n";
  char buf[256];
  for (const ResultRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%d,%d,%d,%d,%.17g,%.17g,%.17g,%.6f\n",
                  r.algorithm.c_str(), r.m, r.J, r.R, r.trial, r.mse,
                  r.mean_relative_error, r.converged_fraction,
                  deterministic ? 0.0 : r.wall_time);
    out << buf;
  }
  if (!out) throw io_error("export_csv: write failed for " + path);
}

/// Self-contained python script: one series per algorithm, points are
/// (m, mean mse over trials), log-scale MSE axis.
inline void emit_plot_script(const std::vector<ResultRow>& rows,
                             const std::string& path) {
  if (rows.empty()) throw invalid_params("emit_plot_script: no rows");
  std::map<std::string, std::map<int, std::pair<double, int>>> agg;
  for (const ResultRow& r : rows) {
    auto& slot = agg[r.algorithm][r.m];
    slot.first += r.mse;
    slot.second += 1;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io_error("emit_plot_script: unwritable path " + path);
  out << "#!/usr/bin/env python3\n"
         "\"\"\"Mean MSE vs measurements per node, one series per algorithm.\"\"\"\n"
         "import matplotlib.pyplot as plt\n\n"
         "series = {\n";
  char buf[128];
  for (const auto& [name, points] : agg) {
    out << "    \"" << name << "\": [";
    bool first = true;
    for (const auto& [m, sum_count] : points) {
      if (!first) out << ", ";
      first = false;
      std::snprintf(buf, sizeof(buf), "(%d, %.17g)", m,
                    sum_count.first / sum_count.second);
      out << buf;
    }
    out << "],\n";
  }
  out << "}\n\n"
         "for name in sorted(series):\n"
         "    pts = series[name]\n"
         "    plt.semilogy([p[0] for p in pts], [p[1] for p in pts],\n"
         "                 marker=\"o\", label=name)\n"
         "plt.xlabel(\"measurements per node m\")\n"
         "plt.ylabel(\"mean MSE\")\n"
         "plt.grid(True, which=\"both\", alpha=0.3)\n"
         "plt.legend()\n"
         "plt.tight_layout()\n"
         "plt.savefig(\"mse_vs_m.png\", dpi=160)\n"
         "print(\"wrote mse_vs_m.png\")\n";
  if (!out) throw io_error("emit_plot_script: write failed for " + path);
}

}  // namespace dcs

#endif  // DCS_HARNESS_HPP
