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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>
#include <string>

#include "enclavedom/policy.hpp"
#include "policy_gen.hpp"

using namespace enclavedom;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const PolicyError& error) {
    return error.code();
  }
  FAIL("expected a PolicyError");
  return Errc::syntax_error;
}

}  // namespace

TEST_CASE("blanket read-only rule with empty outputs") {
  Acl acl = parse_policy("#fs_dom: > stat >\n");
  REQUIRE(acl.rules.size() == 1);
  const AccessRule& rule = acl.rules[0];
  CHECK(rule.func_name == "stat");
  REQUIRE(rule.inputs.size() == 1);
  CHECK(rule.inputs[0].blanket());
  CHECK(rule.inputs[0].domain_label == "fs_dom");
  CHECK(!rule.inputs[0].declared_size.has_value());
  CHECK(rule.outputs.empty());
  REQUIRE(acl.domains.size() == 1);
  CHECK(acl.domains[0].pool_pages == kDefaultPoolPages);
}

TEST_CASE("rule with no grants at all") {
  Acl acl = parse_policy("> noop >");
  REQUIRE(acl.rules.size() == 1);
  CHECK(acl.rules[0].inputs.empty());
  CHECK(acl.rules[0].outputs.empty());
  CHECK(acl.domains.empty());
}

TEST_CASE("sized input and unsized output") {
  Acl acl = parse_policy("key#crypto:32 > sign > sig#crypto:\n");
  REQUIRE(acl.rules.size() == 1);
  const AccessRule& rule = acl.rules[0];
  REQUIRE(rule.inputs.size() == 1);
  CHECK(rule.inputs[0].object_label == "key");
  CHECK(rule.inputs[0].domain_label == "crypto");
  CHECK(rule.inputs[0].declared_size == 32);
  REQUIRE(rule.outputs.size() == 1);
  CHECK(rule.outputs[0].object_label == "sig");
  CHECK(!rule.outputs[0].declared_size.has_value());
  REQUIRE(acl.objects.size() == 2);
}

TEST_CASE("comments, blank lines, CRLF, and loose whitespace") {
  Acl acl = parse_policy(
      "// header comment\r\n"
      "\r\n"
      "domain d1 pages=2   // two pages\r\n"
      "  a#d1:8 ,  #d2:   >  fn1 >   b#d1:\r\n");
  REQUIRE(acl.domains.size() == 2);
  CHECK(acl.domains[0].label == "d1");
  CHECK(acl.domains[0].pool_pages == 2);
  CHECK(acl.domains[1].label == "d2");  // implicit, appended after explicit
  CHECK(acl.domains[1].pool_pages == kDefaultPoolPages);
  REQUIRE(acl.rules.size() == 1);
  CHECK(acl.rules[0].inputs.size() == 2);
}

TEST_CASE("explicit declaration may follow the first reference") {
  Acl acl = parse_policy(
      "#late: > f >\n"
      "domain late pages=9\n");
  REQUIRE(acl.domains.size() == 1);
  CHECK(acl.domains[0].pool_pages == 9);
}

TEST_CASE("implicit domains keep first-reference order after explicit ones") {
  Acl acl = parse_policy(
      "domain z pages=1\n"
      "#b: > f1 >\n"
      "#a: > f2 > #z:\n");
  REQUIRE(acl.domains.size() == 3);
  CHECK(acl.domains[0].label == "z");
  CHECK(acl.domains[1].label == "b");
  CHECK(acl.domains[2].label == "a");
}

TEST_CASE("parse errors carry codes and line numbers") {
  SUBCASE("one separator only") {
    try {
      parse_policy("a#d: > f >\nbad > line\n");
      FAIL("unreachable");
    } catch (const PolicyError& error) {
      CHECK(error.code() == Errc::syntax_error);
      CHECK(error.line() == 2);
      CHECK(error.column() > 0);
    }
  }
  SUBCASE("garbage line") {
    CHECK(code_of([] { parse_policy("not a rule\n"); }) == Errc::syntax_error);
  }
  SUBCASE("missing colon") {
    CHECK(code_of([] { parse_policy("a#d > f >\n"); }) == Errc::syntax_error);
  }
  SUBCASE("duplicate rule") {
    CHECK(code_of([] { parse_policy("> f >\n#d: > f >\n"); }) == Errc::duplicate_rule);
  }
  SUBCASE("duplicate domain") {
    CHECK(code_of([] { parse_policy("domain d\ndomain d pages=2\n"); }) ==
          Errc::duplicate_domain);
  }
  SUBCASE("conflicting object domain") {
    CHECK(code_of([] { parse_policy("a#d1: > f > \n> g > a#d2:\n"); }) ==
          Errc::conflicting_object_domain);
  }
  SUBCASE("conflicting declared sizes") {
    CHECK(code_of([] { parse_policy("a#d:8 > f >\na#d:9 > g >\n"); }) == Errc::bad_size);
  }
  SUBCASE("bad label") {
    CHECK(code_of([] { parse_policy("1bad#d: > f >\n"); }) == Errc::bad_label);
    CHECK(code_of([] { parse_policy("> 9fn >\n"); }) == Errc::bad_label);
    std::string long_label(65, 'a');
    CHECK(code_of([&] { parse_policy("#" + long_label + ": > f >\n"); }) == Errc::bad_label);
    std::string max_label(64, 'a');
    CHECK(parse_policy("#" + max_label + ": > f >\n").domains.size() == 1);
  }
  SUBCASE("bad sizes") {
    CHECK(code_of([] { parse_policy("a#d:0 > f >\n"); }) == Errc::bad_size);
    CHECK(code_of([] { parse_policy("#d:32 > f >\n"); }) == Errc::bad_size);  // blanket+size
    CHECK(code_of([] { parse_policy("domain d pages=0\n"); }) == Errc::bad_size);
    CHECK(code_of([] { parse_policy("domain d pages=1025\n"); }) == Errc::bad_size);
    CHECK(code_of([] { parse_policy("a#d:12x > f >\n"); }) == Errc::syntax_error);
  }
}

TEST_CASE("domain budget: 15 parses, 16 rejected") {
  std::string fifteen;
  std::string sixteen;
  for (int i = 0; i < 16; ++i) {
    std::string line = "#dom" + std::to_string(i) + ": > fn" + std::to_string(i) + " >\n";
    if (i < 15) fifteen += line;
    sixteen += line;
  }
  CHECK(parse_policy(fifteen).domains.size() == 15);
  CHECK(code_of([&] { parse_policy(sixteen); }) == Errc::too_many_domains);
}

TEST_CASE("unsized mentions pick up the object's declared size") {
  Acl acl = parse_policy(
      "key#crypto:32 > f >\n"
      "key#crypto: > g >\n");
  REQUIRE(acl.rules.size() == 2);
  CHECK(acl.rules[1].inputs[0].declared_size == 32);
  REQUIRE(acl.objects.size() == 1);
  CHECK(acl.objects[0].declared_size == 32);
}

TEST_CASE("serialization is canonical and sorted") {
  Acl acl = parse_policy(
      "domain zz pages=2\n"
      "bee#aa:16 > f2 > #zz:\n"
      "> f1 > ant#aa:\n");
  std::string bytes = serialize_acl(acl);
  CHECK(bytes ==
        "ENCLAVEDOM-ACL v1\n"
        "domain aa pages=4\n"
        "domain zz pages=2\n"
        "object ant domain=aa size=*\n"
        "object bee domain=aa size=16\n"
        "rule func=f2 ro=bee rw=*zz\n"
        "rule func=f1 ro=- rw=ant\n");
}

TEST_CASE("empty ACL serializes to just the header") {
  CHECK(serialize_acl(Acl{}) == "ENCLAVEDOM-ACL v1\n");
  Acl loaded = load_acl("ENCLAVEDOM-ACL v1\n");
  CHECK(loaded.domains.empty());
  CHECK(loaded.rules.empty());
}

TEST_CASE("load_acl is the inverse of serialize_acl") {
  Acl acl = parse_policy(
      "domain d1 pages=8\n"
      "a#d1:128 > f > #d2:, b#d1:\n"
      "> g > a#d1:\n");
  Acl loaded = load_acl(serialize_acl(acl));
  CHECK(loaded == acl);
  CHECK(serialize_acl(loaded) == serialize_acl(acl));
}

TEST_CASE("load_acl rejects bad artifacts") {
  SUBCASE("truncated") {
    CHECK(code_of([] { load_acl("ENCLAVEDOM-ACL v1\ndomain d\n"); }) == Errc::syntax_error);
    CHECK(code_of([] { load_acl(""); }) == Errc::syntax_error);
  }
  SUBCASE("wrong version") {
    CHECK(code_of([] { load_acl("ENCLAVEDOM-ACL v2\n"); }) == Errc::version_mismatch);
  }
  SUBCASE("not an artifact") {
    CHECK(code_of([] { load_acl("something else\n"); }) == Errc::syntax_error);
  }
  SUBCASE("rule references unknown object") {
    CHECK(code_of([] { load_acl("ENCLAVEDOM-ACL v1\nrule func=f ro=ghost rw=-\n"); }) ==
          Errc::syntax_error);
  }
  SUBCASE("sections out of order") {
    CHECK(code_of([] {
            load_acl("ENCLAVEDOM-ACL v1\nrule func=f ro=- rw=-\ndomain d pages=4\n");
          }) == Errc::syntax_error);
  }
}

TEST_CASE("parse_policy accepts a serialized artifact") {
  Acl acl = parse_policy("a#d:4 > f >\n");
  Acl reparsed = parse_policy(serialize_acl(acl));
  CHECK(reparsed == acl);
}

TEST_CASE("equality ignores domain and object order but not rule order") {
  Acl a = parse_policy("#d1: > f >\n#d2: > g >\n");
  Acl b = parse_policy("domain d2\n#d1: > f >\n#d2: > g >\n");
  CHECK(a == b);  // domain order differs (d2 explicit first vs implicit later)

  Acl c = parse_policy("#d2: > g >\n#d1: > f >\n");
  CHECK(a != c);  // rule order is semantic
}

TEST_CASE("round-trip fixed point over generated policies") {
  std::mt19937 rng(20260809);
  for (int i = 0; i < 500; ++i) {
    std::string source = testgen::generate_policy(rng);
    CAPTURE(source);
    Acl first = parse_policy(source);
    std::string bytes = serialize_acl(first);
    Acl second = parse_policy(bytes);
    CHECK(second == first);
    CHECK(serialize_acl(second) == bytes);
  }
}
