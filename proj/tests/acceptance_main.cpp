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

#include <cstring>
#include <iostream>
#include <string>
#include <thread>

#include "dcs/acceptance.hpp"

int main(int argc, char** argv) {
  dcs::acceptance::Options opt;
  opt.threads = std::max(1u, std::thread::hardware_concurrency());
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--dcs-lab") == 0 && i + 1 < argc) {
      opt.dcs_lab_binary = argv[++i];
    } else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
      opt.threads = std::max(1, std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: dcs_acceptance [--dcs-lab <path>] [--threads N]\n";
      return 2;
    }
  }
  const auto results = dcs::acceptance::run_all(opt, std::cout);
  return dcs::acceptance::all_passed(results) ? 0 : 1;
}
