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

#include "enclavedom/aclgen.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "enclavedom/access.hpp"

namespace enclavedom::aclgen {

bool LintReport::has_errors() const noexcept {
  return std::any_of(findings.begin(), findings.end(),
                     [](const Finding& f) { return f.severity == Severity::Error; });
}

std::string compile_policy(std::string_view source, std::uint32_t default_pages) {
  ParseOptions options;
  options.implicit_pool_pages = default_pages;
  return serialize_acl(parse_policy(source, options));
}

LintReport lint_policy(std::string_view source) {
  LintReport report;
  Acl acl;
  try {
    acl = parse_policy(source);
  } catch (const PolicyError& error) {
    report.findings.push_back(
        Finding{Severity::Error, errc_name(error.code()), error.line(), error.what()});
    return report;
  }

  std::map<std::string, std::uint32_t> pool_pages;
  for (const DomainDecl& domain : acl.domains) {
    pool_pages[domain.label] = domain.pool_pages;
  }

  // Declared object sizes summed past a domain's pool capacity. Warn-only:
  // dynamic allocation may never reach the declared sizes.
  std::map<std::string, std::uint64_t> declared_per_domain;
  for (const ObjectDecl& object : acl.objects) {
    if (object.declared_size) {
      declared_per_domain[object.domain_label] += *object.declared_size;
    }
  }
  for (const auto& [domain, declared] : declared_per_domain) {
    std::uint64_t capacity = static_cast<std::uint64_t>(pool_pages.at(domain)) * kPageSize;
    if (declared > capacity) {
      report.findings.push_back(Finding{
          Severity::Warn, std::string(kCapacityWarn), 0,
          "declared object sizes in '" + domain + "' total " + std::to_string(declared) +
              " bytes, past the pool capacity of " + std::to_string(capacity) + " bytes"});
    }
  }

  std::set<std::string> referenced;
  for (const AccessRule& rule : acl.rules) {
    for (const auto* side : {&rule.inputs, &rule.outputs}) {
      for (const ObjectSpec& spec : *side) {
        if (!spec.blanket()) referenced.insert(*spec.object_label);
      }
    }
  }
  for (const ObjectDecl& object : acl.objects) {
    if (!referenced.contains(object.label)) {
      report.findings.push_back(Finding{Severity::Warn, std::string(kUnusedObject), 0,
                                        "object '" + object.label +
                                            "' is never referenced by any rule"});
    }
  }

  for (const AccessRule& rule : acl.rules) {
    auto blanket_domains = [](const std::vector<ObjectSpec>& specs) {
      std::set<std::string> domains;
      for (const ObjectSpec& spec : specs) {
        if (spec.blanket()) domains.insert(spec.domain_label);
      }
      return domains;
    };
    auto object_domains = [](const std::vector<ObjectSpec>& specs) {
      std::set<std::string> domains;
      for (const ObjectSpec& spec : specs) {
        if (!spec.blanket()) domains.insert(spec.domain_label);
      }
      return domains;
    };

    for (const auto* side : {&rule.inputs, &rule.outputs}) {
      std::set<std::string> blankets = blanket_domains(*side);
      for (const ObjectSpec& spec : *side) {
        if (!spec.blanket() && blankets.contains(spec.domain_label)) {
          report.findings.push_back(
              Finding{Severity::Warn, std::string(kShadowedGrant), 0,
                      "rule '" + rule.func_name + "': blanket grant on '" +
                          spec.domain_label + "' shadows the per-object grant on '" +
                          *spec.object_label + "'"});
        }
      }
    }

    // Blanket read-only plus object read-write on one domain: the key ends
    // up read-write, so the blanket-ro intent does not hold.
    std::set<std::string> ro_blankets = blanket_domains(rule.inputs);
    std::set<std::string> rw_objects = object_domains(rule.outputs);
    for (const std::string& domain : ro_blankets) {
      if (rw_objects.contains(domain)) {
        report.findings.push_back(
            Finding{Severity::Warn, std::string(kBlanketRoObjectRw), 0,
                    "rule '" + rule.func_name + "': domain '" + domain +
                        "' is granted blanket read-only and object read-write at once"});
      }
    }
  }
  return report;
}

std::string to_json(const LintReport& report) {
  nlohmann::json out = nlohmann::json::array();
  for (const Finding& finding : report.findings) {
    out.push_back({
        {"severity", finding.severity == Severity::Error ? "error" : "warn"},
        {"code", finding.code},
        {"line", finding.line},
        {"message", finding.message},
    });
  }
  return out.dump(2);
}

}  // namespace enclavedom::aclgen
