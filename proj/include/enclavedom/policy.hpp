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
// Policy language front end: parse the line-oriented access-rule DSL into
// a validated ACL, and serialize/load the canonical ACL artifact.
//
// Rule lines have the shape
//
//   <inputs> > <func> > <outputs>
//
// where each side is a comma-separated list of object specifications
// `[object]#domain:[size]`. Inputs are read-only grants, outputs are
// read-write grants. An omitted object label is a blanket grant on the
// whole domain; an omitted size disables size verification for the object.
// `domain <label> [pages=<n>]` lines configure a domain's page pool.
// `//` starts a comment.

#ifndef ENCLAVEDOM_POLICY_HPP_
#define ENCLAVEDOM_POLICY_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "enclavedom/error.hpp"

namespace enclavedom {

inline constexpr std::uint32_t kDefaultPoolPages = 4;
inline constexpr std::uint32_t kMaxPoolPages = 1024;
inline constexpr std::size_t kMaxLabelLength = 64;
inline constexpr std::string_view kAclMagic = "ENCLAVEDOM-ACL";
inline constexpr std::string_view kAclVersion = "v1";

/// One `[object]#domain:[size]` occurrence inside a rule.
struct ObjectSpec {
  std::optional<std::string> object_label;  // absent = blanket grant on the domain
  std::string domain_label;
  std::optional<std::uint64_t> declared_size;  // absent = skip size verification

  bool blanket() const noexcept { return !object_label.has_value(); }

  friend bool operator==(const ObjectSpec&, const ObjectSpec&) = default;
};

struct AccessRule {
  std::string func_name;
  std::vector<ObjectSpec> inputs;   // read-only grants
  std::vector<ObjectSpec> outputs;  // read-write grants
};

struct DomainDecl {
  std::string label;
  std::uint32_t pool_pages = kDefaultPoolPages;

  friend bool operator==(const DomainDecl&, const DomainDecl&) = default;
};

struct ObjectDecl {
  std::string label;
  std::string domain_label;
  std::optional<std::uint64_t> declared_size;

  friend bool operator==(const ObjectDecl&, const ObjectDecl&) = default;
};

/// Validated access control list.
///
/// Domains hold explicit declarations first, then implicitly referenced
/// domains in first-reference order. Objects are listed in first-mention
/// order. Rule order is the policy source order and is semantically
/// meaningful; domain and object order is not. Equality therefore compares
/// rules as a sequence (with each side's specs as an unordered multiset)
/// and domains/objects as unordered sets.
struct Acl {
  std::vector<DomainDecl> domains;
  std::vector<ObjectDecl> objects;
  std::vector<AccessRule> rules;
  std::string version{kAclVersion};
};

bool operator==(const AccessRule& a, const AccessRule& b);
inline bool operator!=(const AccessRule& a, const AccessRule& b) { return !(a == b); }
bool operator==(const Acl& a, const Acl& b);
inline bool operator!=(const Acl& a, const Acl& b) { return !(a == b); }

struct ParseOptions {
  /// Pool pages for domains that are referenced but never declared.
  /// Explicit `domain` lines are not affected.
  std::uint32_t implicit_pool_pages = kDefaultPoolPages;
};

/// Parse policy source into a validated Acl. Also accepts a serialized
/// canonical ACL (recognized by its magic first line) so that policy
/// artifacts can be fed anywhere policy source is accepted.
///
/// Throws PolicyError with codes: syntax_error, duplicate_rule,
/// duplicate_domain, conflicting_object_domain, too_many_domains,
/// bad_label, bad_size.
Acl parse_policy(std::string_view source, const ParseOptions& options = {});

/// Canonical, deterministic text form. Equal Acls serialize to identical
/// bytes regardless of how they were constructed.
std::string serialize_acl(const Acl& acl);

/// Inverse of serialize_acl. Throws PolicyError with version_mismatch for
/// a recognizable artifact of the wrong version, syntax_error otherwise.
Acl load_acl(std::string_view bytes);

/// True iff `label` matches [A-Za-z_][A-Za-z0-9_]* and is 1..64 chars.
bool valid_label(std::string_view label) noexcept;

}  // namespace enclavedom

#endif  // ENCLAVEDOM_POLICY_HPP_
