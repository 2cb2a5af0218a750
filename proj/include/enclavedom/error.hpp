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

#ifndef ENCLAVEDOM_ERROR_HPP_
#define ENCLAVEDOM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace enclavedom {

enum class Errc {
  // policy language
  syntax_error,
  duplicate_rule,
  duplicate_domain,
  conflicting_object_domain,
  too_many_domains,
  bad_label,
  bad_size,
  version_mismatch,
  // domain provisioning and allocation
  already_initialized,
  not_initialized,
  key_exhaustion,
  out_of_memory,
  active_sandbox,
  no_such_domain,
  pool_exhausted,
  unknown_handle,
  double_free,
  bad_key,
  // monitor
  unknown_function,
  nested_limit,
  frame_order_violation,
  wrong_thread,
  unknown_object,
  size_exceeded,
  no_active_grant,
  not_allocated,
  isolation_fault,
  // bench
  unknown_syscall,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Parse or validation failure in policy source or a serialized ACL.
/// Lines and columns are 1-based; a column of 0 means "whole line".
class PolicyError : public Error {
 public:
  PolicyError(Errc code, int line, int column, const std::string& message)
      : Error(code, "line " + std::to_string(line) +
                        (column > 0 ? ":" + std::to_string(column) : "") + ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Denial verdict from the checked backend surfacing as a recoverable error.
/// Hardware backends never throw this; a denied raw access faults instead.
class IsolationFault : public Error {
 public:
  explicit IsolationFault(const std::string& message)
      : Error(Errc::isolation_fault, message) {}
};

}  // namespace enclavedom

#endif  // ENCLAVEDOM_ERROR_HPP_
