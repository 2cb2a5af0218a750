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
// Random valid-policy generator for round-trip properties. Emits source
// text with randomized whitespace and comments, never violating the
// validation rules (labels, one domain per object, consistent sizes,
// at most 15 domains).

#ifndef ENCLAVEDOM_TESTS_POLICY_GEN_HPP_
#define ENCLAVEDOM_TESTS_POLICY_GEN_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace enclavedom::testgen {

struct GenObject {
  std::string label;
  std::string domain;
  std::optional<std::uint64_t> size;
};

inline std::string gen_label(std::mt19937& rng, const std::string& prefix, int index) {
  static const char alphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789_";
  std::uniform_int_distribution<int> len_dist(0, 6);
  std::uniform_int_distribution<std::size_t> char_dist(0, sizeof(alphabet) - 2);
  std::string label = prefix + std::to_string(index);
  int extra = len_dist(rng);
  for (int i = 0; i < extra; ++i) label += alphabet[char_dist(rng)];
  return label;
}

inline std::string pad(std::mt19937& rng) {
  std::uniform_int_distribution<int> dist(0, 2);
  return std::string(static_cast<std::size_t>(dist(rng)), ' ');
}

/// A syntactically and semantically valid random policy.
inline std::string generate_policy(std::mt19937& rng) {
  std::uniform_int_distribution<int> domain_count_dist(1, 6);
  std::uniform_int_distribution<int> object_count_dist(0, 8);
  std::uniform_int_distribution<int> rule_count_dist(0, 10);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> pages_dist(1, 64);
  std::uniform_int_distribution<std::uint64_t> size_dist(1, 1 << 20);

  int domain_count = domain_count_dist(rng);
  std::vector<std::string> domains;
  std::vector<bool> declared;
  for (int i = 0; i < domain_count; ++i) {
    domains.push_back(gen_label(rng, "dom", i));
    declared.push_back(coin(rng) == 1);
  }

  std::vector<GenObject> objects;
  int object_count = object_count_dist(rng);
  for (int i = 0; i < object_count; ++i) {
    GenObject object;
    object.label = gen_label(rng, "obj", i);
    object.domain = domains[std::uniform_int_distribution<std::size_t>(
        0, domains.size() - 1)(rng)];
    if (coin(rng)) object.size = size_dist(rng);
    objects.push_back(std::move(object));
  }

  std::string source;
  for (std::size_t i = 0; i < domains.size(); ++i) {
    if (!declared[i]) continue;
    source += "domain " + domains[i];
    if (coin(rng)) source += " pages=" + std::to_string(pages_dist(rng));
    if (coin(rng)) source += "  // pool";
    source += '\n';
  }

  auto emit_spec = [&](std::string& line) {
    // Either a blanket spec or an object mention (size written or omitted).
    if (objects.empty() || coin(rng)) {
      const std::string& domain = domains[std::uniform_int_distribution<std::size_t>(
          0, domains.size() - 1)(rng)];
      line += pad(rng) + "#" + domain + ":" + pad(rng);
      return domain;
    }
    const GenObject& object = objects[std::uniform_int_distribution<std::size_t>(
        0, objects.size() - 1)(rng)];
    line += pad(rng) + object.label + "#" + object.domain + ":";
    if (object.size && coin(rng)) line += std::to_string(*object.size);
    line += pad(rng);
    return object.domain;
  };

  int rule_count = rule_count_dist(rng);
  std::uniform_int_distribution<int> side_dist(0, 3);
  for (int r = 0; r < rule_count; ++r) {
    std::string line;
    int inputs = side_dist(rng);
    for (int i = 0; i < inputs; ++i) {
      if (i) line += ",";
      emit_spec(line);
    }
    line += pad(rng) + ">" + pad(rng) + gen_label(rng, "fn", r) + pad(rng) + ">" + pad(rng);
    int outputs = side_dist(rng);
    for (int i = 0; i < outputs; ++i) {
      if (i) line += ",";
      emit_spec(line);
    }
    if (coin(rng)) line += " // rule";
    source += line + '\n';
  }
  if (coin(rng)) source += "// trailing comment\n";
  return source;
}

}  // namespace enclavedom::testgen

#endif  // ENCLAVEDOM_TESTS_POLICY_GEN_HPP_
