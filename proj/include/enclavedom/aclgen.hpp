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

#ifndef ENCLAVEDOM_ACLGEN_HPP_
#define ENCLAVEDOM_ACLGEN_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "enclavedom/policy.hpp"

namespace enclavedom::aclgen {

enum class Severity {
  Warn,
  Error,
};

struct Finding {
  Severity severity;
  std::string code;
  int line = 0;  // 0 = not tied to a source line
  std::string message;
};

struct LintReport {
  std::vector<Finding> findings;

  bool has_errors() const noexcept;
};

// Finding codes
inline constexpr std::string_view kCapacityWarn = "CapacityWarn";
inline constexpr std::string_view kUnusedObject = "UnusedObject";
inline constexpr std::string_view kShadowedGrant = "ShadowedGrant";
inline constexpr std::string_view kBlanketRoObjectRw = "BlanketRoObjectRw";

/// Compile policy text into the canonical ACL artifact.
std::string compile_policy(std::string_view source, std::uint32_t default_pages);

/// Lint parsed policy text: capacity overcommit, unused objects, blanket
/// grants shadowing per-object grants, and blanket-ro/object-rw mixes.
/// Parse failures are reported as error findings instead of thrown.
LintReport lint_policy(std::string_view source);

std::string to_json(const LintReport& report);

}  // namespace enclavedom::aclgen

#endif  // ENCLAVEDOM_ACLGEN_HPP_
