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

#include "enclavedom/policy.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "enclavedom/access.hpp"
#include "enclavedom/error.hpp"

namespace enclavedom {

namespace {

bool is_label_start(char c) {
  return c == '_' || (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
}

bool is_label_char(char c) { return is_label_start(c) || (c >= '0' && c <= '9'); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

// Working state while collecting lines; validation happens at the end so
// declarations may appear in any order.
struct Draft {
  std::vector<std::pair<DomainDecl, int>> explicit_domains;  // decl, line
  std::vector<AccessRule> rules;
  std::vector<int> rule_lines;
  // object label -> (domain, size, defining line); first mention wins order
  std::vector<std::string> object_order;
  std::unordered_map<std::string, ObjectDecl> objects;
  std::unordered_map<std::string, int> object_lines;
  std::vector<std::string> domain_ref_order;  // first-reference order of spec domains
  std::unordered_set<std::string> domain_ref_seen;
};

class Parser {
 public:
  Parser(std::string_view source, const ParseOptions& options)
      : source_(source), options_(options) {}

  Acl run() {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= source_.size()) {
      std::size_t eol = source_.find('\n', pos);
      std::string_view line = source_.substr(
          pos, eol == std::string_view::npos ? source_.size() - pos : eol - pos);
      ++line_no;
      parse_line(line, line_no);
      if (eol == std::string_view::npos) break;
      pos = eol + 1;
    }
    return finalize();
  }

 private:
  [[noreturn]] void fail(Errc code, int line, int col, const std::string& msg) const {
    throw PolicyError(code, line, col, msg);
  }

  int col_of(std::string_view line, std::string_view token) const {
    if (token.data() >= line.data() && token.data() <= line.data() + line.size()) {
      return static_cast<int>(token.data() - line.data()) + 1;
    }
    return 0;
  }

  void parse_line(std::string_view raw, int line_no) {
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (auto comment = line.find("//"); comment != std::string_view::npos) {
      line = line.substr(0, comment);
    }
    std::string_view body = trim(line);
    if (body.empty()) return;

    if (body.find('>') != std::string_view::npos) {
      parse_rule(line, body, line_no);
      return;
    }
    if (body.substr(0, 6) == "domain" &&
        (body.size() == 6 || std::isspace(static_cast<unsigned char>(body[6])))) {
      parse_domain_decl(line, body, line_no);
      return;
    }
    fail(Errc::syntax_error, line_no, col_of(line, body),
         "expected a rule, a domain declaration, or a comment");
  }

  std::string check_label(std::string_view token, std::string_view line, int line_no) const {
    if (token.empty() || token.size() > kMaxLabelLength || !is_label_start(token.front()) ||
        !std::all_of(token.begin(), token.end(), is_label_char)) {
      fail(Errc::bad_label, line_no, col_of(line, token),
           "bad label '" + std::string(token) + "'");
    }
    return std::string(token);
  }

  std::uint64_t parse_uint(std::string_view token, std::string_view line, int line_no,
                           const char* what) const {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec == std::errc::result_out_of_range) {
      fail(Errc::bad_size, line_no, col_of(line, token),
           std::string(what) + " out of range: '" + std::string(token) + "'");
    }
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      fail(Errc::syntax_error, line_no, col_of(line, token),
           std::string("expected an unsigned integer for ") + what);
    }
    return value;
  }

  void parse_domain_decl(std::string_view line, std::string_view body, int line_no) {
    std::vector<std::string_view> tokens;
    for (std::string_view part : split(body, ' ')) {
      part = trim(part);
      if (!part.empty()) tokens.push_back(part);
    }
    if (tokens.size() < 2 || tokens.size() > 3) {
      fail(Errc::syntax_error, line_no, col_of(line, body),
           "expected 'domain <label> [pages=<n>]'");
    }
    DomainDecl decl;
    decl.label = check_label(tokens[1], line, line_no);
    if (tokens.size() == 3) {
      std::string_view opt = tokens[2];
      if (opt.substr(0, 6) != "pages=") {
        fail(Errc::syntax_error, line_no, col_of(line, opt), "expected 'pages=<n>'");
      }
      std::uint64_t pages = parse_uint(opt.substr(6), line, line_no, "pages");
      if (pages < 1 || pages > kMaxPoolPages) {
        fail(Errc::bad_size, line_no, col_of(line, opt),
             "pages must be in [1, " + std::to_string(kMaxPoolPages) + "]");
      }
      decl.pool_pages = static_cast<std::uint32_t>(pages);
    }
    for (const auto& [existing, decl_line] : draft_.explicit_domains) {
      if (existing.label == decl.label) {
        fail(Errc::duplicate_domain, line_no, col_of(line, tokens[1]),
             "domain '" + decl.label + "' already declared on line " +
                 std::to_string(decl_line));
      }
    }
    draft_.explicit_domains.emplace_back(std::move(decl), line_no);
  }

  ObjectSpec parse_objspec(std::string_view spec, std::string_view line, int line_no) {
    std::size_t hash = spec.find('#');
    if (hash == std::string_view::npos) {
      fail(Errc::syntax_error, line_no, col_of(line, spec),
           "object spec must contain '#': '[object]#domain:[size]'");
    }
    std::string_view after = spec.substr(hash + 1);
    std::size_t colon_rel = after.find(':');
    if (colon_rel == std::string_view::npos) {
      fail(Errc::syntax_error, line_no, col_of(line, spec),
           "object spec must contain ':' after the domain label");
    }

    ObjectSpec result;
    std::string_view obj = trim(spec.substr(0, hash));
    std::string_view dom = trim(after.substr(0, colon_rel));
    std::string_view size = trim(after.substr(colon_rel + 1));

    if (!obj.empty()) result.object_label = check_label(obj, line, line_no);
    result.domain_label = check_label(dom, line, line_no);
    if (!size.empty()) {
      if (result.blanket()) {
        fail(Errc::bad_size, line_no, col_of(line, size),
             "blanket spec '#" + result.domain_label + ":' cannot declare a size");
      }
      std::uint64_t bytes = parse_uint(size, line, line_no, "object size");
      if (bytes == 0) {
        fail(Errc::bad_size, line_no, col_of(line, size), "object size must be > 0");
      }
      result.declared_size = bytes;
    }
    note_domain_reference(result.domain_label);
    return result;
  }

  std::vector<ObjectSpec> parse_objlist(std::string_view text, std::string_view line,
                                        int line_no) {
    std::vector<ObjectSpec> specs;
    if (trim(text).empty()) return specs;
    for (std::string_view part : split(text, ',')) {
      std::string_view spec = trim(part);
      if (spec.empty()) {
        fail(Errc::syntax_error, line_no, col_of(line, part), "empty object spec");
      }
      specs.push_back(parse_objspec(spec, line, line_no));
    }
    return specs;
  }

  void parse_rule(std::string_view line, std::string_view body, int line_no) {
    std::vector<std::string_view> parts = split(body, '>');
    if (parts.size() != 3) {
      fail(Errc::syntax_error, line_no, col_of(line, body),
           "rule must have the shape '<inputs> > <func> > <outputs>'");
    }
    AccessRule rule;
    std::string_view func = trim(parts[1]);
    rule.func_name = check_label(func, line, line_no);
    rule.inputs = parse_objlist(parts[0], line, line_no);
    rule.outputs = parse_objlist(parts[2], line, line_no);

    for (std::size_t i = 0; i < draft_.rules.size(); ++i) {
      if (draft_.rules[i].func_name == rule.func_name) {
        fail(Errc::duplicate_rule, line_no, col_of(line, func),
             "duplicate rule for '" + rule.func_name + "' (first on line " +
                 std::to_string(draft_.rule_lines[i]) + ")");
      }
    }
    record_objects(rule, line_no);
    draft_.rules.push_back(std::move(rule));
    draft_.rule_lines.push_back(line_no);
  }

  void note_domain_reference(const std::string& domain) {
    if (draft_.domain_ref_seen.insert(domain).second) {
      draft_.domain_ref_order.push_back(domain);
    }
  }

  void record_objects(const AccessRule& rule, int line_no) {
    auto visit = [&](const ObjectSpec& spec) {
      if (spec.blanket()) return;
      const std::string& label = *spec.object_label;
      auto it = draft_.objects.find(label);
      if (it == draft_.objects.end()) {
        draft_.objects.emplace(label,
                               ObjectDecl{label, spec.domain_label, spec.declared_size});
        draft_.object_order.push_back(label);
        draft_.object_lines[label] = line_no;
        return;
      }
      ObjectDecl& decl = it->second;
      if (decl.domain_label != spec.domain_label) {
        fail(Errc::conflicting_object_domain, line_no, 0,
             "object '" + label + "' placed in both '" + decl.domain_label + "' and '" +
                 spec.domain_label + "'");
      }
      if (spec.declared_size) {
        if (decl.declared_size && *decl.declared_size != *spec.declared_size) {
          fail(Errc::bad_size, line_no, 0,
               "object '" + label + "' declared with conflicting sizes " +
                   std::to_string(*decl.declared_size) + " and " +
                   std::to_string(*spec.declared_size));
        }
        decl.declared_size = spec.declared_size;
      }
    };
    for (const ObjectSpec& spec : rule.inputs) visit(spec);
    for (const ObjectSpec& spec : rule.outputs) visit(spec);
  }

  Acl finalize() {
    Acl acl;
    std::unordered_set<std::string> declared;
    for (auto& [decl, decl_line] : draft_.explicit_domains) {
      declared.insert(decl.label);
      acl.domains.push_back(std::move(decl));
    }
    // Implicit domains follow explicit ones, in first-reference order.
    for (const std::string& label : draft_.domain_ref_order) {
      if (!declared.contains(label)) {
        acl.domains.push_back(DomainDecl{label, options_.implicit_pool_pages});
      }
    }
    if (acl.domains.size() > kMaxDomains) {
      fail(Errc::too_many_domains, 0, 0,
           "policy uses " + std::to_string(acl.domains.size()) + " domains; at most " +
               std::to_string(kMaxDomains) + " are supported (one key is reserved)");
    }
    for (const std::string& label : draft_.object_order) {
      acl.objects.push_back(draft_.objects.at(label));
    }
    // Mentions without a size pick up the object's resolved declared size,
    // so every occurrence of an object agrees with the object record.
    for (AccessRule& rule : draft_.rules) {
      for (auto* side : {&rule.inputs, &rule.outputs}) {
        for (ObjectSpec& spec : *side) {
          if (!spec.blanket()) {
            spec.declared_size = draft_.objects.at(*spec.object_label).declared_size;
          }
        }
      }
      acl.rules.push_back(std::move(rule));
    }
    return acl;
  }

  std::string_view source_;
  ParseOptions options_;
  Draft draft_;
};

std::string_view first_line(std::string_view text) {
  std::size_t eol = text.find('\n');
  std::string_view line = eol == std::string_view::npos ? text : text.substr(0, eol);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

using SpecKey = std::tuple<bool, std::string, std::string, std::uint64_t>;

SpecKey spec_key(const ObjectSpec& spec) {
  return {spec.blanket(), spec.object_label.value_or(""), spec.domain_label,
          spec.declared_size.value_or(0)};
}

std::vector<SpecKey> sorted_keys(const std::vector<ObjectSpec>& specs) {
  std::vector<SpecKey> keys;
  keys.reserve(specs.size());
  for (const ObjectSpec& spec : specs) keys.push_back(spec_key(spec));
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::string rule_item(const ObjectSpec& spec) {
  return spec.blanket() ? "*" + spec.domain_label : *spec.object_label;
}

std::string join_items(const std::vector<ObjectSpec>& specs) {
  if (specs.empty()) return "-";
  std::vector<std::string> items;
  items.reserve(specs.size());
  for (const ObjectSpec& spec : specs) items.push_back(rule_item(spec));
  std::sort(items.begin(), items.end());
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
  return out;
}

}  // namespace

bool valid_label(std::string_view label) noexcept {
  return !label.empty() && label.size() <= kMaxLabelLength && is_label_start(label.front()) &&
         std::all_of(label.begin(), label.end(), is_label_char);
}

bool operator==(const AccessRule& a, const AccessRule& b) {
  return a.func_name == b.func_name && sorted_keys(a.inputs) == sorted_keys(b.inputs) &&
         sorted_keys(a.outputs) == sorted_keys(b.outputs);
}

bool operator==(const Acl& a, const Acl& b) {
  if (a.version != b.version || a.rules.size() != b.rules.size()) return false;
  for (std::size_t i = 0; i < a.rules.size(); ++i) {
    if (!(a.rules[i] == b.rules[i])) return false;
  }
  auto domain_set = [](const Acl& acl) {
    std::vector<DomainDecl> d = acl.domains;
    std::sort(d.begin(), d.end(),
              [](const DomainDecl& x, const DomainDecl& y) { return x.label < y.label; });
    return d;
  };
  auto object_set = [](const Acl& acl) {
    std::vector<ObjectDecl> o = acl.objects;
    std::sort(o.begin(), o.end(),
              [](const ObjectDecl& x, const ObjectDecl& y) { return x.label < y.label; });
    return o;
  };
  return domain_set(a) == domain_set(b) && object_set(a) == object_set(b);
}

Acl parse_policy(std::string_view source, const ParseOptions& options) {
  if (first_line(source).substr(0, kAclMagic.size()) == kAclMagic) {
    return load_acl(source);
  }
  return Parser(source, options).run();
}

std::string serialize_acl(const Acl& acl) {
  std::string out;
  out += kAclMagic;
  out += ' ';
  out += acl.version;
  out += '\n';

  std::vector<DomainDecl> domains = acl.domains;
  std::sort(domains.begin(), domains.end(),
            [](const DomainDecl& a, const DomainDecl& b) { return a.label < b.label; });
  for (const DomainDecl& d : domains) {
    out += "domain " + d.label + " pages=" + std::to_string(d.pool_pages) + "\n";
  }

  std::vector<ObjectDecl> objects = acl.objects;
  std::sort(objects.begin(), objects.end(),
            [](const ObjectDecl& a, const ObjectDecl& b) { return a.label < b.label; });
  for (const ObjectDecl& o : objects) {
    out += "object " + o.label + " domain=" + o.domain_label + " size=";
    out += o.declared_size ? std::to_string(*o.declared_size) : "*";
    out += '\n';
  }

  for (const AccessRule& rule : acl.rules) {
    out += "rule func=" + rule.func_name + " ro=" + join_items(rule.inputs) +
           " rw=" + join_items(rule.outputs) + "\n";
  }
  return out;
}

namespace {

class AclReader {
 public:
  explicit AclReader(std::string_view bytes) : bytes_(bytes) {}

  Acl run() {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos < bytes_.size()) {
      std::size_t eol = bytes_.find('\n', pos);
      if (eol == std::string_view::npos) {
        lines.push_back(bytes_.substr(pos));
        pos = bytes_.size();
      } else {
        lines.push_back(bytes_.substr(pos, eol - pos));
        pos = eol + 1;
      }
    }
    for (auto& line : lines) {
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    }
    if (lines.empty()) {
      throw PolicyError(Errc::syntax_error, 1, 0, "empty ACL input");
    }
    check_header(lines[0]);

    // Sections must appear in canonical order: domains, objects, rules.
    int section = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      int line_no = static_cast<int>(i) + 1;
      std::string_view line = lines[i];
      if (line.empty()) {
        if (i + 1 != lines.size()) {
          throw PolicyError(Errc::syntax_error, line_no, 0, "unexpected blank line");
        }
        continue;
      }
      std::vector<std::string_view> tokens;
      for (std::string_view t : split(line, ' ')) {
        if (!t.empty()) tokens.push_back(t);
      }
      if (tokens[0] == "domain") {
        require_section(0, section, line_no, "domain");
        read_domain(tokens, line_no);
      } else if (tokens[0] == "object") {
        require_section(1, section, line_no, "object");
        read_object(tokens, line_no);
      } else if (tokens[0] == "rule") {
        require_section(2, section, line_no, "rule");
        read_rule(tokens, line_no);
      } else {
        throw PolicyError(Errc::syntax_error, line_no, 0,
                          "unknown ACL line '" + std::string(tokens[0]) + "'");
      }
    }
    validate();
    return std::move(acl_);
  }

 private:
  void check_header(std::string_view line) {
    std::string expected = std::string(kAclMagic) + " " + std::string(kAclVersion);
    if (line == expected) return;
    if (line.substr(0, kAclMagic.size()) == kAclMagic) {
      throw PolicyError(Errc::version_mismatch, 1, 0,
                        "expected '" + expected + "', got '" + std::string(line) + "'");
    }
    throw PolicyError(Errc::syntax_error, 1, 0, "missing ACL header");
  }

  void require_section(int want, int& section, int line_no, const char* what) {
    if (section > want) {
      throw PolicyError(Errc::syntax_error, line_no, 0,
                        std::string(what) + " line after a later section");
    }
    section = want;
  }

  std::string_view field(std::string_view token, std::string_view prefix, int line_no) {
    if (token.substr(0, prefix.size()) != prefix) {
      throw PolicyError(Errc::syntax_error, line_no, 0,
                        "expected '" + std::string(prefix) + "...', got '" +
                            std::string(token) + "'");
    }
    return token.substr(prefix.size());
  }

  std::string read_label(std::string_view token, int line_no) {
    if (!valid_label(token)) {
      throw PolicyError(Errc::bad_label, line_no, 0, "bad label '" + std::string(token) + "'");
    }
    return std::string(token);
  }

  std::uint64_t read_uint(std::string_view token, int line_no, const char* what) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
      throw PolicyError(Errc::syntax_error, line_no, 0,
                        std::string("bad ") + what + " '" + std::string(token) + "'");
    }
    return value;
  }

  void read_domain(const std::vector<std::string_view>& tokens, int line_no) {
    if (tokens.size() != 3) {
      throw PolicyError(Errc::syntax_error, line_no, 0, "expected 'domain <label> pages=<n>'");
    }
    DomainDecl decl;
    decl.label = read_label(tokens[1], line_no);
    std::uint64_t pages = read_uint(field(tokens[2], "pages=", line_no), line_no, "pages");
    if (pages < 1 || pages > kMaxPoolPages) {
      throw PolicyError(Errc::bad_size, line_no, 0, "pages out of range");
    }
    decl.pool_pages = static_cast<std::uint32_t>(pages);
    for (const DomainDecl& existing : acl_.domains) {
      if (existing.label == decl.label) {
        throw PolicyError(Errc::duplicate_domain, line_no, 0,
                          "duplicate domain '" + decl.label + "'");
      }
    }
    acl_.domains.push_back(std::move(decl));
  }

  void read_object(const std::vector<std::string_view>& tokens, int line_no) {
    if (tokens.size() != 4) {
      throw PolicyError(Errc::syntax_error, line_no, 0,
                        "expected 'object <label> domain=<label> size=<n|*>'");
    }
    ObjectDecl decl;
    decl.label = read_label(tokens[1], line_no);
    decl.domain_label = read_label(field(tokens[2], "domain=", line_no), line_no);
    std::string_view size = field(tokens[3], "size=", line_no);
    if (size != "*") {
      std::uint64_t bytes = read_uint(size, line_no, "size");
      if (bytes == 0) throw PolicyError(Errc::bad_size, line_no, 0, "object size must be > 0");
      decl.declared_size = bytes;
    }
    if (objects_.contains(decl.label)) {
      if (objects_.at(decl.label).domain_label != decl.domain_label) {
        throw PolicyError(Errc::conflicting_object_domain, line_no, 0,
                          "object '" + decl.label + "' in two domains");
      }
      throw PolicyError(Errc::syntax_error, line_no, 0,
                        "duplicate object '" + decl.label + "'");
    }
    objects_.emplace(decl.label, decl);
    acl_.objects.push_back(std::move(decl));
  }

  std::vector<ObjectSpec> read_items(std::string_view text, int line_no) {
    std::vector<ObjectSpec> specs;
    if (text == "-") return specs;
    for (std::string_view item : split(text, ',')) {
      if (item.empty()) {
        throw PolicyError(Errc::syntax_error, line_no, 0, "empty rule item");
      }
      if (item.front() == '*') {
        std::string domain = read_label(item.substr(1), line_no);
        if (!domain_declared(domain)) {
          throw PolicyError(Errc::syntax_error, line_no, 0,
                            "blanket item references undeclared domain '" + domain + "'");
        }
        specs.push_back(ObjectSpec{std::nullopt, std::move(domain), std::nullopt});
      } else {
        std::string label = read_label(item, line_no);
        auto it = objects_.find(label);
        if (it == objects_.end()) {
          throw PolicyError(Errc::syntax_error, line_no, 0,
                            "rule references undeclared object '" + label + "'");
        }
        specs.push_back(
            ObjectSpec{label, it->second.domain_label, it->second.declared_size});
      }
    }
    return specs;
  }

  void read_rule(const std::vector<std::string_view>& tokens, int line_no) {
    if (tokens.size() != 4) {
      throw PolicyError(Errc::syntax_error, line_no, 0,
                        "expected 'rule func=<name> ro=<items> rw=<items>'");
    }
    AccessRule rule;
    rule.func_name = read_label(field(tokens[1], "func=", line_no), line_no);
    rule.inputs = read_items(field(tokens[2], "ro=", line_no), line_no);
    rule.outputs = read_items(field(tokens[3], "rw=", line_no), line_no);
    for (const AccessRule& existing : acl_.rules) {
      if (existing.func_name == rule.func_name) {
        throw PolicyError(Errc::duplicate_rule, line_no, 0,
                          "duplicate rule for '" + rule.func_name + "'");
      }
    }
    acl_.rules.push_back(std::move(rule));
  }

  bool domain_declared(const std::string& label) const {
    return std::any_of(acl_.domains.begin(), acl_.domains.end(),
                       [&](const DomainDecl& d) { return d.label == label; });
  }

  void validate() {
    if (acl_.domains.size() > kMaxDomains) {
      throw PolicyError(Errc::too_many_domains, 0, 0,
                        "ACL declares " + std::to_string(acl_.domains.size()) +
                            " domains; at most " + std::to_string(kMaxDomains) +
                            " are supported");
    }
    for (const ObjectDecl& object : acl_.objects) {
      if (!domain_declared(object.domain_label)) {
        throw PolicyError(Errc::syntax_error, 0, 0,
                          "object '" + object.label + "' references undeclared domain '" +
                              object.domain_label + "'");
      }
    }
  }

  std::string_view bytes_;
  Acl acl_;
  std::unordered_map<std::string, ObjectDecl> objects_;
};

}  // namespace

Acl load_acl(std::string_view bytes) { return AclReader(bytes).run(); }

}  // namespace enclavedom
