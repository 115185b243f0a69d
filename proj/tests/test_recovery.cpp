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

#include <catch2/catch.hpp>
#include <cmath>

#include "dcs/analysis.hpp"
#include "dcs/recovery.hpp"

using namespace dcs;

namespace {

struct Instance {
  SignalEnsemble ensemble;
  std::vector<Vec> signals;
  SensingMatrix Phi;
  MeasurementSet set;
  SideInformation si;
};

Instance make_instance(const EnsembleParams& params, int m, std::uint64_t seed,
                       int R = 0, int R1 = 0) {
  Instance inst;
  inst.ensemble = gen_ensemble(params);
  for (int j = 0; j < params.J; ++j)
    inst.signals.push_back(node_signal(inst.ensemble, j));
  inst.Phi = gen_matrix(m, params.n, derive_seed(seed, 1));
  for (const Vec& x : inst.signals) inst.set.y.push_back(measure(inst.Phi, x));
  if (R > 0) {
    double S = 0.0;
    for (const Vec& y : inst.set.y) S = std::max(S, y.lpNorm<Eigen::Infinity>());
    const Quantizer q{R, S > 0.0 ? S : 1.0};
    const Quantizer q1{R1 > 0 ? R1 : R, q.S};
    inst.set.y[0] = dequantize(quantize(inst.set.y[0], q1), q1);
    for (std::size_t j = 1; j < inst.set.y.size(); ++j)
      inst.set.y[j] = dequantize(quantize(inst.set.y[j], q), q);
    inst.set.quantized = true;
    inst.set.quantizer = q;
  }
  inst.si = SideInformation{inst.signals[0], inst.set.y[0]};
  return inst;
}

double rmse(const EnsembleRecovery& rec, const std::vector<Vec>& signals) {
  double acc = 0.0;
  for (std::size_t j = 1; j < signals.size(); ++j)
    acc += (rec.theta_hat[j] - signals[j]).squaredNorm();
  return std::sqrt(acc / static_cast<double>(signals.size() - 1));
}

}  // namespace

TEST_CASE("separate recovery of zero measurements is zero", "[recovery]") {
  const auto Phi = gen_matrix(8, 24, 1);
  MeasurementSet set;
  set.y.assign(3, Vec::Zero(8));
  const auto rec = recover_separate(Phi.entries, set, 0.0);
  REQUIRE(rec.nodes() == 3);
  for (const Vec& t : rec.theta_hat) CHECK(t.isZero(0.0));
  CHECK(rec.converged_fraction() == 1.0);
}

TEST_CASE("doi returns the side information verbatim for identical nodes",
          "[recovery]") {
  EnsembleParams p;
  p.n = 32;
  p.J = 3;
  p.model = JsmModel::jsm1(4);
  p.k_I = 0;  // all nodes equal the common component
  p.seed = 2;
  const auto inst = make_instance(p, 12, 3);
  const auto rec = recover_doi(inst.Phi.entries, inst.set, inst.si, 0.0);
  for (std::size_t j = 0; j < 3; ++j) CHECK(rec.theta_hat[j] == inst.si.theta_1);
  CHECK(rec.per_node[0].solved == false);
}

TEST_CASE("doi reconstructs exactly without quantization", "[recovery]") {
  // difference signals are at most 2 k_I = 4 sparse; m = 24 measurements sit
  // comfortably past the empirical recovery transition at n = 64
  int good_trials = 0;
  const int trials = 20;
  for (int t = 0; t < trials; ++t) {
    EnsembleParams p;
    p.n = 64;
    p.J = 4;
    p.model = JsmModel::jsm1(8);
    p.k_I = 2;
    p.support_policy = SupportPolicy::DisjointInnovations;
    p.seed = 100 + static_cast<std::uint64_t>(t);
    const auto inst = make_instance(p, 24, 200 + static_cast<std::uint64_t>(t));
    const auto rec = recover_doi(inst.Phi.entries, inst.set, inst.si, 0.0);
    bool all_good = true;
    for (std::size_t j = 1; j < 4; ++j) {
      const double rel =
          (rec.theta_hat[j] - inst.signals[j]).norm() / inst.signals[j].norm();
      all_good = all_good && rel <= 1e-5;
    }
    good_trials += all_good ? 1 : 0;
  }
  CHECK(good_trials >= 19);  // >= 95%
}

TEST_CASE("doi cancels any common shift exactly", "[recovery]") {
  EnsembleParams p;
  p.n = 48;
  p.J = 3;
  p.model = JsmModel::jsm1(6);
  p.k_I = 2;
  p.seed = 5;
  const auto inst = make_instance(p, 24, 7);
  const auto base = recover_doi(inst.Phi.entries, inst.set, inst.si, 0.0);

  // add the same dense vector to every signal (and its image to the
  // measurements); the recovery error must not move
  Rng rng(11);
  Vec shift(48);
  for (int i = 0; i < 48; ++i) shift[i] = rng.gaussian();
  const Vec shift_y = inst.Phi.entries * shift;

  Instance shifted = inst;
  for (std::size_t j = 0; j < 3; ++j) {
    shifted.signals[j] += shift;
    shifted.set.y[j] += shift_y;
  }
  shifted.si = SideInformation{shifted.signals[0], shifted.set.y[0]};
  const auto moved = recover_doi(shifted.Phi.entries, shifted.set, shifted.si, 0.0);

  for (std::size_t j = 1; j < 3; ++j) {
    const Vec err_a = base.theta_hat[j] - inst.signals[j];
    const Vec err_b = moved.theta_hat[j] - shifted.signals[j];
    CHECK((err_a - err_b).lpNorm<Eigen::Infinity>() <= 1e-10);
  }
}

TEST_CASE("doi error obeys the C*eps bound on quantized runs", "[recovery]") {
  // one matrix, verified inside the guarantee regime at order 2*(2 k_I),
  // shared across all quantized trials
  const auto Phi = gen_matrix(192, 256, 404);
  const double delta = estimate_rip(Phi, 4, 10000, 505);
  REQUIRE(delta < std::sqrt(2.0) - 1.0);
  const double C = bpdn_constant(delta);
  BpdnSolver solver(Phi.entries);

  int checked = 0, ok = 0;
  for (int t = 0; t < 15; ++t) {
    EnsembleParams p;
    p.n = 256;
    p.J = 5;
    p.model = JsmModel::jsm1(6);
    p.k_I = 1;
    p.support_policy = SupportPolicy::DisjointInnovations;
    p.seed = 300 + static_cast<std::uint64_t>(t);
    const auto ensemble = gen_ensemble(p);

    std::vector<Vec> signals;
    MeasurementSet set;
    for (int j = 0; j < 5; ++j) {
      signals.push_back(node_signal(ensemble, j));
      set.y.push_back(measure(Phi, signals.back()));
    }
    double S = 0.0;
    for (const Vec& y : set.y) S = std::max(S, y.lpNorm<Eigen::Infinity>());
    const Quantizer q{8, S};
    for (Vec& y : set.y) y = dequantize(quantize(y, q), q);
    const SideInformation si{signals[0], set.y[0]};

    const double eps_solve = std::sqrt(2.0) * q.step() * std::sqrt(192.0) / 2.0;
    const auto rec = recover_doi(solver, set, si, eps_solve);
    for (std::size_t j = 1; j < 5; ++j) {
      const Vec diff_truth = ensemble.theta_I[j] - ensemble.theta_I[0];
      const double eps_measured =
          ((set.y[j] - si.y_1) - Phi.entries * diff_truth).norm();
      const double err = (rec.theta_hat[j] - signals[j]).norm();
      ++checked;
      ok += err <= doi_bound(C, eps_measured) ? 1 : 0;
    }
  }
  CHECK(checked == 60);
  CHECK(ok >= 57);  // >= 95% of node-trials
}

TEST_CASE("texas doi passes through a pure common component", "[recovery]") {
  EnsembleParams p;
  p.n = 40;
  p.J = 5;
  p.model = JsmModel::jsm1(5);
  p.k_I = 0;
  p.seed = 13;
  const auto inst = make_instance(p, 16, 17);
  // innovations vanish, so the measurement average is exactly y_C and every
  // inner problem sees a zero right-hand side
  const auto rec = recover_texas_doi(inst.Phi.entries, inst.set, inst.si, 0.0);
  for (std::size_t j = 0; j < 5; ++j)
    CHECK((rec.theta_hat[j] - inst.si.theta_1).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("texas doi floor shrinks like one over sqrt J", "[recovery][slow]") {
  // feasible disjoint setting: J * k_I <= n at every J
  const int m = 80;
  auto mean_rmse = [&](int J) {
    double acc = 0.0;
    const int trials = 10;
    for (int t = 0; t < trials; ++t) {
      EnsembleParams p;
      p.n = 256;
      p.J = J;
      p.model = JsmModel::jsm1(10);
      p.k_I = 2;
      p.support_policy = SupportPolicy::DisjointInnovations;
      p.norm_policy = NormPolicy::equal_norm(1.0);
      p.seed = derive_seed(600, static_cast<std::uint64_t>(J),
                           static_cast<std::uint64_t>(t));
      const auto inst = make_instance(
          p, m, derive_seed(700, static_cast<std::uint64_t>(J), static_cast<std::uint64_t>(t)));
      const double eps_inner = 1.2 / std::sqrt(static_cast<double>(J));
      const auto rec =
          recover_texas_doi(inst.Phi.entries, inst.set, inst.si, eps_inner);
      acc += rmse(rec, inst.signals);
    }
    return acc / 10.0;
  };
  const double r8 = mean_rmse(8);
  const double r32 = mean_rmse(32);
  const double r128 = mean_rmse(128);
  const double ratio1 = r32 / r8;
  const double ratio2 = r128 / r32;
  INFO("rmse " << r8 << " " << r32 << " " << r128);
  CHECK(ratio1 >= 0.35);
  CHECK(ratio1 <= 0.72);
  CHECK(ratio2 >= 0.35);
  CHECK(ratio2 <= 0.72);
}

TEST_CASE("texas doi error stays under the closed-form floor bound",
          "[recovery][slow]") {
  // one matrix with delta_hat at sparsity k_C + 2 k_I verified in-regime,
  // shared across trials
  const auto Phi = gen_matrix(192, 256, 901);
  const double delta = estimate_rip(Phi, 4, 10000, 1001);
  REQUIRE(delta < std::sqrt(2.0) - 1.0);
  const double bound = texas_doi_bound(bpdn_constant(delta), delta, 16, 1.0);
  const double eps_inner = std::sqrt(1.0 + delta) / std::sqrt(16.0);
  BpdnSolver solver(Phi.entries);

  int checked = 0, ok = 0;
  for (int t = 0; t < 8; ++t) {
    EnsembleParams p;
    p.n = 256;
    p.J = 16;
    p.model = JsmModel::jsm1(2);
    p.k_I = 1;
    p.support_policy = SupportPolicy::DisjointInnovations;
    p.norm_policy = NormPolicy::equal_norm(1.0);
    p.seed = 800 + static_cast<std::uint64_t>(t);
    const auto ensemble = gen_ensemble(p);

    std::vector<Vec> signals;
    MeasurementSet set;
    for (int j = 0; j < 16; ++j) {
      signals.push_back(node_signal(ensemble, j));
      set.y.push_back(measure(Phi, signals.back()));
    }
    const SideInformation si{signals[0], set.y[0]};
    const auto rec = recover_texas_doi(solver, set, si, eps_inner);
    for (std::size_t j = 1; j < 16; ++j) {
      ++checked;
      ok += (rec.theta_hat[j] - signals[j]).norm() <= bound ? 1 : 0;
    }
  }
  CHECK(checked == 120);
  CHECK(ok >= 114);  // >= 95%
}

TEST_CASE("side information node passes through exactly", "[recovery]") {
  EnsembleParams p;
  p.n = 64;
  p.J = 4;
  p.model = JsmModel::jsm1(8);
  p.k_I = 2;
  p.seed = 19;
  const auto inst = make_instance(p, 32, 23, 8);
  const auto doi = recover_doi(inst.Phi.entries, inst.set, inst.si, 0.05);
  const auto tex = recover_texas_doi(inst.Phi.entries, inst.set, inst.si, 0.05);
  CHECK(doi.theta_hat[0] == inst.si.theta_1);
  CHECK(tex.theta_hat[0] == inst.si.theta_1);
}

TEST_CASE("texas holdem recovers a pure common component", "[recovery]") {
  EnsembleParams p;
  p.n = 64;
  p.J = 6;
  p.model = JsmModel::jsm1(8);
  p.k_I = 0;
  p.seed = 29;
  const auto inst = make_instance(p, 32, 31);
  const auto rec = recover_texas_holdem(inst.Phi.entries, inst.set, 0.0);
  for (std::size_t j = 0; j < 6; ++j) {
    const double rel =
        (rec.theta_hat[j] - inst.signals[j]).norm() / inst.signals[j].norm();
    CHECK(rel <= 1e-5);
  }
}

TEST_CASE("texas holdem trails texas doi when m is scarce", "[recovery][slow]") {
  double mse_holdem = 0.0, mse_texas = 0.0;
  for (int t = 0; t < 8; ++t) {
    EnsembleParams p;
    p.n = 256;
    p.J = 24;
    p.model = JsmModel::jsm1(20);
    p.k_I = 2;
    p.seed = 1100 + static_cast<std::uint64_t>(t);
    const auto inst = make_instance(p, 40, 1200 + static_cast<std::uint64_t>(t));
    const double eps_inner = std::sqrt(2.0) * std::sqrt(static_cast<double>(p.k_I)) /
                             std::sqrt(static_cast<double>(p.J));
    const auto holdem = recover_texas_holdem(inst.Phi.entries, inst.set, eps_inner);
    const auto texas =
        recover_texas_doi(inst.Phi.entries, inst.set, inst.si, eps_inner);
    mse_holdem += ensemble_mse(holdem, inst.ensemble);
    mse_texas += ensemble_mse(texas, inst.ensemble);
  }
  CHECK(mse_texas < mse_holdem);
}

TEST_CASE("separate recovery trails doi in the joint-sparse regime",
          "[recovery][slow]") {
  double mse_sep = 0.0, mse_doi = 0.0;
  for (int t = 0; t < 20; ++t) {
    EnsembleParams p;
    p.n = 256;
    p.J = 6;
    p.model = JsmModel::jsm1(20);
    p.k_I = 5;
    p.seed = 1300 + static_cast<std::uint64_t>(t);
    const auto inst = make_instance(p, 40, 1400 + static_cast<std::uint64_t>(t));
    BpdnSolver solver(inst.Phi.entries);
    mse_sep += ensemble_mse(recover_separate(solver, inst.set, 0.0), inst.ensemble);
    mse_doi += ensemble_mse(recover_doi(solver, inst.set, inst.si, 0.0),
                            inst.ensemble);
  }
  CHECK(mse_doi < mse_sep);
}

TEST_CASE("doi and separate agree when nothing is shared", "[recovery]") {
  // k_C = 0 and well-separated innovations: both paths recover exactly
  EnsembleParams p;
  p.n = 64;
  p.J = 4;
  p.model = JsmModel::jsm1(0);
  p.k_I = 2;
  p.support_policy = SupportPolicy::DisjointInnovations;
  p.seed = 37;
  const auto inst = make_instance(p, 40, 41);
  BpdnSolver solver(inst.Phi.entries);
  const auto sep = recover_separate(solver, inst.set, 0.0);
  const auto doi = recover_doi(solver, inst.set, inst.si, 0.0);
  for (std::size_t j = 1; j < 4; ++j)
    CHECK((sep.theta_hat[j] - doi.theta_hat[j]).norm() <= 1e-5);
}

TEST_CASE("tecc transpose estimator tightens with more nodes", "[recovery]") {
  auto mean_err = [&](int J) {
    double acc = 0.0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
      Rng rng(derive_seed(1500, static_cast<std::uint64_t>(J),
                          static_cast<std::uint64_t>(t)));
      Vec x_C(64);
      for (int i = 0; i < 64; ++i) x_C[i] = rng.gaussian();
      Vec x_hat = Vec::Zero(64);
      for (int j = 0; j < J; ++j) {
        const auto Phi = gen_matrix(
            32, 64, derive_seed(1600, static_cast<std::uint64_t>(J),
                                static_cast<std::uint64_t>(t * 1000 + j)));
        x_hat += Phi.entries.transpose() * (Phi.entries * x_C);
      }
      x_hat /= static_cast<double>(J);
      acc += (x_hat - x_C).norm() / x_C.norm();
    }
    return acc / trials;
  };
  const double e10 = mean_err(10);
  const double e50 = mean_err(50);
  const double e200 = mean_err(200);
  INFO("estimator errors " << e10 << " " << e50 << " " << e200);
  CHECK(e50 < e10);
  CHECK(e200 < e50);
}

TEST_CASE("tecc trails doi under jsm3 with side information", "[recovery][slow]") {
  double mse_tecc = 0.0, mse_doi = 0.0;
  for (int t = 0; t < 5; ++t) {
    EnsembleParams p;
    p.n = 64;
    p.J = 20;
    p.model = JsmModel::jsm3();
    p.k_I = 4;
    p.seed = 1700 + static_cast<std::uint64_t>(t);
    const auto inst = make_instance(p, 24, 1800 + static_cast<std::uint64_t>(t));

    std::vector<SensingMatrix> mats;
    MeasurementSet tecc_set;
    for (int j = 0; j < 20; ++j) {
      mats.push_back(gen_matrix(24, 64,
                                derive_seed(1900 + static_cast<std::uint64_t>(t),
                                            static_cast<std::uint64_t>(j))));
      tecc_set.y.push_back(measure(mats.back(), inst.signals[static_cast<std::size_t>(j)]));
    }
    const auto tecc = recover_tecc(mats, tecc_set, 2.0);
    const auto doi = recover_doi(inst.Phi.entries, inst.set, inst.si, 0.0);
    mse_tecc += ensemble_mse(tecc, inst.ensemble);
    mse_doi += ensemble_mse(doi, inst.ensemble);
  }
  CHECK(mse_doi < mse_tecc);
}

TEST_CASE("tecc rejects degenerate matrix sets", "[recovery]") {
  const auto Phi = gen_matrix(8, 16, 43);
  MeasurementSet set;
  set.y.assign(1, Vec::Zero(8));
  CHECK_THROWS_AS(recover_tecc({Phi}, set, 0.0), invalid_params);

  set.y.assign(3, Vec::Zero(8));
  CHECK_THROWS_AS(recover_tecc({Phi, Phi, Phi}, set, 0.0), shared_matrix_error);

  const auto Phi2 = gen_matrix(8, 16, 44);
  CHECK_THROWS_AS(recover_tecc({Phi, Phi2, Phi2}, set, 0.0), shared_matrix_error);

  const auto Phi3 = gen_matrix(8, 16, 45);
  CHECK_NOTHROW(recover_tecc({Phi, Phi2, Phi3}, set, 0.0));
}

TEST_CASE("recovery rejects malformed inputs", "[recovery]") {
  const auto Phi = gen_matrix(8, 16, 47);
  MeasurementSet set;
  set.y.assign(2, Vec::Zero(8));
  SideInformation bad_si{Vec::Zero(15), Vec::Zero(8)};
  CHECK_THROWS_AS(recover_doi(Phi.entries, set, bad_si, 0.0), invalid_params);

  SideInformation si{Vec::Zero(16), Vec::Zero(8)};
  MeasurementSet ragged;
  ragged.y = {Vec::Zero(8), Vec::Zero(7)};
  CHECK_THROWS_AS(recover_doi(Phi.entries, ragged, si, 0.0), dimension_mismatch);

  MeasurementSet single;
  single.y = {Vec::Zero(8)};
  CHECK_THROWS_AS(recover_texas_doi(Phi.entries, single, si, 0.0), invalid_params);
  CHECK_THROWS_AS(recover_texas_holdem(Phi.entries, single, 0.0), invalid_params);
}
