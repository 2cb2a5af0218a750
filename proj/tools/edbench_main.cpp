// Copyright 2026 The EnclaveDom Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "enclavedom/bench.hpp"
#include "enclavedom/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"EnclaveDom syscall microbenchmarks"};
  app.require_subcommand(1);

  std::string backend_name = "checked";
  std::uint64_t iterations = 10000;
  std::string out_path;
  bool print_table = false;
  std::vector<std::string> syscalls = enclavedom::bench::default_bench_syscalls();

  CLI::App* run = app.add_subcommand("run", "run the syscall benchmarks");
  run->add_option("--backend", backend_name, "checked | pageprot | pkey | auto")
      ->check(CLI::IsMember({"checked", "pageprot", "pkey", "auto"}));
  run->add_option("--iters", iterations, "timed iterations per run (5 runs)");
  run->add_option("--out", out_path, "write the JSON report here");
  run->add_flag("--table", print_table, "print an aligned text table");
  run->add_option("--syscalls", syscalls, "syscall names to benchmark")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    enclavedom::MiniOs::Options options;
    options.backend = *enclavedom::backend_from_name(backend_name);
    enclavedom::MiniOs os(options);

    enclavedom::bench::BenchReport report =
        enclavedom::bench::run_syscall_bench(os, syscalls, iterations);

    std::string json = enclavedom::bench::to_json(report);
    if (!out_path.empty()) {
      std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
      if (!out) {
        std::cerr << "edbench: cannot write '" << out_path << "'\n";
        return 1;
      }
      out << json << "\n";
    }
    if (print_table) {
      std::cout << enclavedom::bench::format_table(report);
    } else if (out_path.empty()) {
      std::cout << json << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "edbench: " << e.what() << "\n";
    return 1;
  }
}
