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

#ifndef ENCLAVEDOM_DOMAIN_HPP_
#define ENCLAVEDOM_DOMAIN_HPP_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "enclavedom/access.hpp"
#include "enclavedom/backend.hpp"
#include "enclavedom/policy.hpp"

namespace enclavedom {

/// Opaque reference to a live allocation inside a domain pool.
struct ObjectHandle {
  std::uint32_t key_id = 0;
  std::uint64_t id = 0;
  std::uint64_t size = 0;
};

struct AccessEvent {
  int key;
  AccessMode requested;  // ReadOnly for reads, ReadWrite for writes
  bool allowed;
};

struct DomainInfo {
  std::string label;
  int key_id;
  std::size_t pool_pages;
  std::size_t capacity_bytes;
  std::size_t live_bytes;
  std::size_t high_water;
};

/// Provisions one protection key and one page pool per ACL domain, and
/// sub-allocates data objects inside the pools with a first-fit free list.
///
/// Allocation bookkeeping (free lists, sizes, handle maps) lives in
/// manager-private untagged memory, never inside the pools, so a domain's
/// capacity is exactly pool_pages * 4096 and a write grant on the domain
/// cannot reach allocator state.
///
/// Managers on per-thread backends may coexist; a PageProt manager must
/// be the only one live in the process, since its protections (and the
/// page permissions they imply) are process-wide.
///
/// Construction and teardown are single-threaded. alloc/free are
/// serialized by an internal lock. Access modes are per-thread state
/// (PageProt excepted, as documented on Backend).
class DomainManager {
 public:
  DomainManager(const Acl& acl, std::unique_ptr<Backend> backend);
  ~DomainManager();

  DomainManager(const DomainManager&) = delete;
  DomainManager& operator=(const DomainManager&) = delete;

  /// Releases keys, untags and unmaps all pools. Requires no live sandbox
  /// frames. Throws Error{active_sandbox} or Error{not_initialized}.
  void teardown();
  bool torn_down() const noexcept { return torn_down_; }

  /// Allocate `size` bytes in `domain`, 16-byte aligned, zeroed.
  /// Outside the startup phase the calling thread must hold ReadWrite on
  /// the domain's key. Throws no_such_domain, bad_size, pool_exhausted,
  /// no_active_grant.
  ObjectHandle alloc(std::string_view domain, std::size_t size);

  /// Release an allocation. In the checked backend, freed bytes are
  /// poisoned with 0xDD. Throws no_such_domain, unknown_handle,
  /// double_free.
  void free(std::string_view domain, const ObjectHandle& handle);

  /// Set the calling thread's access mode for a provisioned key.
  /// Key 0 is immutable; unknown or unprovisioned keys throw bad_key.
  void set_access(int key, AccessMode mode);
  AccessMode thread_access(int key) const;

  /// Mediated object access. The checked backend consults the thread's
  /// KeyRegister and throws IsolationFault on denial; hardware backends
  /// perform the raw access and a denial faults the process.
  void read_bytes(const ObjectHandle& handle, std::size_t offset, std::span<std::byte> out);
  void write_bytes(const ObjectHandle& handle, std::size_t offset,
                   std::span<const std::byte> in);

  /// Verdict-returning variants. On hardware backends the access runs
  /// under a fault guard that converts a protection fault into Denied,
  /// so traces can be compared across backends.
  Verdict try_read(const ObjectHandle& handle, std::size_t offset, std::span<std::byte> out);
  Verdict try_write(const ObjectHandle& handle, std::size_t offset,
                    std::span<const std::byte> in);

  std::vector<DomainInfo> domains() const;
  DomainInfo domain_info(std::string_view domain) const;
  int key_of(std::string_view domain) const;
  std::vector<int> provisioned_keys() const;

  /// Pool offset of a live allocation (allocator introspection for tests).
  std::size_t allocation_offset(const ObjectHandle& handle) const;

  /// Unmediated view of a domain's pool bytes. Bypasses enforcement in the
  /// checked backend by design; hardware backends still fault on
  /// insufficient access.
  std::span<const std::byte> unchecked_pool_bytes(std::string_view domain) const;

  std::size_t bookkeeping_bytes(std::string_view domain) const;
  std::size_t peak_bookkeeping_bytes(std::string_view domain) const;

  void enable_access_trace(bool enabled);
  std::vector<AccessEvent> take_access_trace();

  Backend& backend() noexcept { return *backend_; }
  const Backend& backend() const noexcept { return *backend_; }

  bool in_startup_phase() const noexcept { return startup_phase_.load(); }
  /// Closes the startup allocation window; called by the monitor on the
  /// first grant.
  void end_startup_phase() noexcept { startup_phase_.store(false); }

  // Live sandbox-frame accounting, maintained by the monitor so teardown
  // can refuse while a sandbox is open.
  void note_frame_opened() noexcept { live_frames_.fetch_add(1); }
  void note_frame_closed() noexcept { live_frames_.fetch_sub(1); }
  int live_frames() const noexcept { return live_frames_.load(); }

 private:
  struct Interval {
    std::size_t offset;
    std::size_t size;
  };

  struct DomainState {
    std::string label;
    int key = 0;
    std::byte* base = nullptr;
    std::size_t pages = 0;
    std::vector<Interval> free_list;  // sorted by offset, coalesced
    std::unordered_map<std::uint64_t, Interval> live;
    std::uint64_t next_id = 1;
    std::size_t live_bytes = 0;
    std::size_t high_water = 0;
    std::size_t peak_bookkeeping = 0;
  };

  DomainState& state_for(std::string_view domain);
  const DomainState& state_for(std::string_view domain) const;
  DomainState& state_for_key(std::uint32_t key, const char* what);
  const Interval& live_interval(const DomainState& d, const ObjectHandle& h,
                                std::size_t offset, std::size_t len) const;
  void record(int key, AccessMode requested, bool allowed);
  void update_peak_bookkeeping(DomainState& d);
  void release_all() noexcept;

  std::unique_ptr<Backend> backend_;
  std::vector<DomainState> domains_;
  std::unordered_map<std::string, std::size_t> by_label_;
  std::unordered_map<std::uint32_t, std::size_t> by_key_;
  mutable std::mutex alloc_mutex_;
  std::atomic<bool> startup_phase_{true};
  std::atomic<int> live_frames_{0};
  bool torn_down_ = false;

  mutable std::mutex trace_mutex_;
  bool trace_enabled_ = false;
  std::vector<AccessEvent> trace_;
};

}  // namespace enclavedom

#endif  // ENCLAVEDOM_DOMAIN_HPP_
