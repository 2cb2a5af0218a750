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
// Policy generator: compiles a policy file to the canonical ACL artifact
// and lints policies for capacity and grant-shape problems.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "enclavedom/aclgen.hpp"
#include "enclavedom/error.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EnclaveDom policy generator"};
  app.require_subcommand(1);

  std::string policy_path;
  std::string out_path;
  std::uint32_t default_pages = enclavedom::kDefaultPoolPages;
  bool json_output = false;

  CLI::App* compile = app.add_subcommand("compile", "compile a policy to an ACL artifact");
  compile->add_option("policy", policy_path, "policy file")->required();
  compile->add_option("-o,--out", out_path, "output ACL path")->required();
  compile->add_option("--pages", default_pages,
                      "pool pages for domains without an explicit declaration");

  CLI::App* lint = app.add_subcommand("lint", "lint a policy");
  lint->add_option("policy", policy_path, "policy file")->required();
  lint->add_flag("--json", json_output, "emit findings as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (compile->parsed()) {
      std::string acl = enclavedom::aclgen::compile_policy(read_file(policy_path), default_pages);
      std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
      if (!out) {
        std::cerr << "aclgen: cannot write '" << out_path << "'\n";
        return kExitError;
      }
      out << acl;
      return kExitOk;
    }

    enclavedom::aclgen::LintReport report =
        enclavedom::aclgen::lint_policy(read_file(policy_path));
    if (json_output) {
      std::cout << enclavedom::aclgen::to_json(report) << "\n";
    } else {
      for (const auto& finding : report.findings) {
        std::cerr << (finding.severity == enclavedom::aclgen::Severity::Error ? "error"
                                                                              : "warn")
                  << " [" << finding.code << "]";
        if (finding.line > 0) std::cerr << " line " << finding.line;
        std::cerr << ": " << finding.message << "\n";
      }
    }
    return report.has_errors() ? kExitError : kExitOk;
  } catch (const enclavedom::PolicyError& e) {
    std::cerr << "aclgen: " << policy_path << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "aclgen: " << e.what() << "\n";
    return kExitError;
  }
}
