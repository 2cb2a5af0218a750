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
//
// Demo driver for the fd-table corruption case study. In protected mode
// on a hardware backend the attack terminates the process with an access
// fault; run it in a subprocess when that is the expected outcome.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "enclavedom/error.hpp"
#include "enclavedom/minios.hpp"

int main(int argc, char** argv) {
  CLI::App app{"EnclaveDom mini-libOS demo"};
  app.require_subcommand(1);

  std::string mode = "protected";
  std::string backend_name = "checked";
  std::string variant_name = "raw";
  std::string policy_path;

  CLI::App* run_attack = app.add_subcommand("run-attack", "run the fd-table corruption demo");
  run_attack->add_option("--mode", mode, "vanilla | protected")
      ->check(CLI::IsMember({"vanilla", "protected"}));
  run_attack->add_option("--backend", backend_name, "checked | pageprot | pkey | auto")
      ->check(CLI::IsMember({"checked", "pageprot", "pkey", "auto"}));
  run_attack->add_option("--variant", variant_name, "raw | deputy")
      ->check(CLI::IsMember({"raw", "deputy"}));
  run_attack->add_option("--policy", policy_path, "policy file (default: built-in demo policy)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    enclavedom::MiniOs::Options options;
    options.backend = *enclavedom::backend_from_name(backend_name);
    options.protected_mode = (mode == "protected");
    if (!policy_path.empty()) {
      std::ifstream in(policy_path, std::ios::binary);
      if (!in) {
        std::cerr << "minios-demo: cannot read '" << policy_path << "'\n";
        return 1;
      }
      std::ostringstream buffer;
      buffer << in.rdbuf();
      options.policy_text = buffer.str();
    }

    enclavedom::MiniOs os(options);
    enclavedom::AttackVariant variant = variant_name == "deputy"
                                            ? enclavedom::AttackVariant::HijackedCallback
                                            : enclavedom::AttackVariant::RawWrite;
    enclavedom::AttackOutcome outcome = os.run_fd_table_attack(variant);
    std::cout << "AttackOutcome: "
              << (outcome == enclavedom::AttackOutcome::Succeeded ? "Succeeded" : "Denied")
              << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "minios-demo: " << e.what() << "\n";
    return 1;
  }
}
