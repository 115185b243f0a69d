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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "dcs/acceptance.hpp"
#include "dcs/analysis.hpp"
#include "dcs/harness.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_run(const std::string& config_path, const std::string& out_override,
            int threads, bool deterministic_csv) {
  dcs::ExperimentConfig config = dcs::load_config(config_path);
  if (dcs::apply_env_seed_override(config))
    std::cerr << "base_seed overridden by DCS_LAB_SEED ("
              << config.base_seed << ")\n";

  const fs::path out_dir = out_override.empty() ? fs::path(config.output_path)
                                                : fs::path(out_override);
  fs::create_directories(out_dir);

  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = dcs::run_experiment(config, threads);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const std::string csv = (out_dir / "results.csv").string();
  const std::string plot = (out_dir / "plot_results.py").string();
  dcs::export_csv(rows, csv, deterministic_csv);
  dcs::emit_plot_script(rows, plot);

  std::printf("%zu result rows in %.1f s\n", rows.size(), elapsed);
  std::printf("wrote %s\n", csv.c_str());
  std::printf("wrote %s\n", plot.c_str());
  return 0;
}

int cmd_rate(int J, int m, int R, int m1, int R1) {
  const auto out = dcs::rate_accounting(dcs::RateBudget{J, m, R, m1, R1});
  std::printf("total_bits=%llu m_prime=%.10g delta_m=%.10g\n",
              static_cast<unsigned long long>(out.total_bits), out.m_prime,
              out.delta_m);
  return 0;
}

int cmd_verify(const char* argv0, int threads) {
  dcs::acceptance::Options opt;
  opt.threads = threads;
  std::error_code ec;
  const fs::path self = fs::canonical(fs::path(argv0), ec);
  if (!ec) opt.dcs_lab_binary = self.string();
  const auto results = dcs::acceptance::run_all(opt, std::cout);
  return dcs::acceptance::all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dcs-lab: joint-recovery benchmark harness for distributed "
               "compressed sensing"};
  app.require_subcommand(1);

  int threads = std::max(1u, std::thread::hardware_concurrency());

  auto* run = app.add_subcommand("run", "execute a benchmark sweep from a config");
  std::string config_path, out_dir;
  bool deterministic_csv = false;
  run->add_option("--config", config_path, "experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "output directory (default: config output_path)");
  run->add_option("--threads", threads, "worker threads");
  run->add_flag("--deterministic-csv", deterministic_csv,
                "write wall_time as 0 so reruns diff byte-for-byte");

  auto* rate = app.add_subcommand("rate", "print the side-information rate accounting");
  int J = 0, m = 0, R = 0, m1 = 0, R1 = 0;
  rate->add_option("--J", J, "number of nodes")->required();
  rate->add_option("--m", m, "measurements per non-SI node")->required();
  rate->add_option("--R", R, "bits per measurement")->required();
  rate->add_option("--m1", m1, "SI measurements")->required();
  rate->add_option("--R1", R1, "SI bits per measurement")->required();

  auto* verify = app.add_subcommand("verify", "run the built-in acceptance suite");
  verify->add_option("--threads", threads, "worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(config_path, out_dir, threads, deterministic_csv);
    if (rate->parsed()) return cmd_rate(J, m, R, m1, R1);
    if (verify->parsed()) return cmd_verify(argv[0], threads);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 0;
}
