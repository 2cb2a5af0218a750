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

#ifndef ENCLAVEDOM_MONITOR_HPP_
#define ENCLAVEDOM_MONITOR_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "enclavedom/domain.hpp"
#include "enclavedom/policy.hpp"

namespace enclavedom {

inline constexpr int kMaxSandboxDepth = 16;

struct SizedObject {
  std::string label;
  std::uint64_t declared_size;
};

struct GrantEntry {
  std::vector<int> ro_keys;  // sorted, disjoint from rw_keys (rw wins)
  std::vector<int> rw_keys;  // sorted
  std::vector<SizedObject> sized_objects;
};

/// Per-function grant table compiled from the ACL at init. Immutable
/// afterwards and readable from any thread.
class GrantTable {
 public:
  GrantTable() = default;
  GrantTable(const Acl& acl, const DomainManager& domains);

  const GrantEntry* find(std::string_view func) const;
  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t footprint_bytes() const;

 private:
  std::unordered_map<std::string, GrantEntry> entries_;
};

/// Token for one open execution sandbox. Frames form a per-thread LIFO;
/// revoking restores deny-all on every provisioned key, not the previous
/// frame's modes.
struct SandboxFrame {
  std::uint64_t token = 0;
  std::string func_name;
  std::thread::id thread;
  int depth = 0;
};

struct MonitorTimers {
  std::uint64_t grant_ns = 0;
  std::uint64_t revoke_ns = 0;
  std::uint64_t check_ns = 0;
  std::uint64_t grants = 0;
  std::uint64_t revokes = 0;
  std::uint64_t checks = 0;

  std::uint64_t total_ns() const noexcept { return grant_ns + revoke_ns + check_ns; }
};

/// Runtime monitor: opens and closes dynamic execution sandboxes around
/// privileged functions and mediates sensitive-object transfer across the
/// trust boundary. Grants are keyed by function name and default-deny:
/// no rule, no access.
class Monitor {
 public:
  Monitor(Acl acl, std::unique_ptr<Backend> backend);

  Monitor(const Monitor&) = delete;
  Monitor& operator=(const Monitor&) = delete;

  DomainManager& domains() noexcept { return *manager_; }
  const DomainManager& domains() const noexcept { return *manager_; }
  const Acl& acl() const noexcept { return acl_; }
  const GrantTable& grant_table() const noexcept { return grants_; }

  /// Elevate the calling thread's access to the function's domains
  /// (inputs read-only, outputs read-write, everything else denied).
  /// Throws unknown_function, nested_limit.
  SandboxFrame grant_data_access(std::string_view func_name);

  /// Exit the sandbox: every provisioned key on this thread goes back to
  /// None, regardless of outer frames. The frame must be the calling
  /// thread's top of stack. Throws frame_order_violation, wrong_thread.
  void revoke_data_access(const SandboxFrame& frame);

  /// Run `body` inside a sandbox for `func_name`; revoke runs on every
  /// exit path, including exceptions.
  template <typename F>
  auto sandboxed_call(std::string_view func_name, F&& body) {
    SandboxFrame frame = grant_data_access(func_name);
    if constexpr (std::is_void_v<std::invoke_result_t<F>>) {
      try {
        std::forward<F>(body)();
      } catch (...) {
        revoke_data_access(frame);
        throw;
      }
      revoke_data_access(frame);
    } else {
      std::invoke_result_t<F> result = [&] {
        try {
          return std::forward<F>(body)();
        } catch (...) {
          revoke_data_access(frame);
          throw;
        }
      }();
      revoke_data_access(frame);
      return result;
    }
  }

  /// Size verification against the object's declared size; objects with no
  /// declared size always pass. Throws unknown_object, size_exceeded.
  void check_input_size(std::string_view object_label, std::uint64_t size);
  void check_output_size(std::string_view object_label, std::uint64_t size);

  /// Allocate an ACL-declared object in its domain and record the mapping.
  /// Requires the same access as DomainManager::alloc.
  ObjectHandle allocate_object(std::string_view object_label, std::uint64_t size);
  ObjectHandle object_handle(std::string_view object_label) const;

  /// Copy across the trust boundary. copy_from requires an active
  /// ReadWrite grant on the object's domain and enforces the declared
  /// size; copy_to requires ReadOnly or better and a destination at least
  /// as large as the object.
  void copy_from_untrusted(std::string_view object_label, std::span<const std::byte> source);
  void copy_to_untrusted(std::string_view object_label, std::span<std::byte> dest);

  void teardown();

  int depth() const;
  std::size_t peak_frame_depth() const noexcept { return peak_depth_; }

  void enable_timing(bool enabled) noexcept { timing_enabled_ = enabled; }
  void reset_timers() noexcept { timers_ = {}; }
  const MonitorTimers& timers() const noexcept { return timers_; }

  /// Bytes of monitor bookkeeping, deterministic for a given workload.
  std::size_t object_registry_bytes() const;
  std::size_t frame_stack_peak_bytes() const;
  std::size_t footprint_bytes() const;  // grant table + objects + frames

 private:
  struct FrameRecord {
    std::uint64_t token;
    std::string func_name;
  };

  struct ObjectState {
    std::string domain_label;
    std::optional<std::uint64_t> declared_size;
    bool allocated = false;
    ObjectHandle handle;
  };

  void set_all_keys(AccessMode mode);
  ObjectState& object_state(std::string_view label, const char* what);
  const ObjectState& object_state(std::string_view label, const char* what) const;

  Acl acl_;
  std::unique_ptr<DomainManager> manager_;
  GrantTable grants_;
  std::unordered_map<std::string, ObjectState> objects_;

  mutable std::mutex frames_mutex_;
  std::unordered_map<std::thread::id, std::vector<FrameRecord>> frames_;
  std::uint64_t next_token_ = 1;
  std::size_t peak_depth_ = 0;

  bool timing_enabled_ = false;
  MonitorTimers timers_;
};

}  // namespace enclavedom

#endif  // ENCLAVEDOM_MONITOR_HPP_
