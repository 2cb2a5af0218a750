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

#include "enclavedom/domain.hpp"

#include <sys/mman.h>

#include <algorithm>
#include <cstring>

#include "enclavedom/error.hpp"
#include "fault_probe.hpp"

namespace enclavedom {

namespace {

constexpr std::size_t kAllocAlign = 16;
constexpr std::byte kFreePoison{0xDD};

// Per-thread backends may coexist (independent pools, independent
// registers), but the page-protection backend changes process-wide state
// and must be the only live manager.
std::mutex g_registry_mutex;
int g_live_managers = 0;
int g_live_exclusive = 0;

void register_manager(bool exclusive) {
  std::lock_guard lock(g_registry_mutex);
  if (g_live_exclusive > 0 || (exclusive && g_live_managers > 0)) {
    throw Error(Errc::already_initialized,
                "a process-wide manager is live; only one may exist at a time");
  }
  ++g_live_managers;
  if (exclusive) ++g_live_exclusive;
}

void unregister_manager(bool exclusive) {
  std::lock_guard lock(g_registry_mutex);
  --g_live_managers;
  if (exclusive) --g_live_exclusive;
}

std::size_t align_up(std::size_t value, std::size_t alignment) {
  return (value + alignment - 1) & ~(alignment - 1);
}

// Rough per-entry cost of the node-based handle map, counted for the
// memory-overhead report.
constexpr std::size_t kLiveMapEntryCost =
    sizeof(std::uint64_t) + 2 * sizeof(std::size_t) + 2 * sizeof(void*);

}  // namespace

DomainManager::DomainManager(const Acl& acl, std::unique_ptr<Backend> backend)
    : backend_(std::move(backend)) {
  register_manager(!backend_->per_thread());
  try {
    domains_.reserve(acl.domains.size());
    for (const DomainDecl& decl : acl.domains) {
      DomainState state;
      state.label = decl.label;
      state.pages = decl.pool_pages;
      state.key = backend_->provision_key();

      std::size_t bytes = state.pages * kPageSize;
      void* mem = mmap(nullptr, bytes, PROT_READ | PROT_WRITE,
                       MAP_PRIVATE | MAP_ANONYMOUS, -1, 0);
      if (mem == MAP_FAILED) {
        backend_->release_key(state.key);
        throw Error(Errc::out_of_memory,
                    "cannot map " + std::to_string(bytes) + " pool bytes");
      }
      state.base = static_cast<std::byte*>(mem);
      backend_->tag_region(state.base, state.pages, state.key);
      state.free_list.push_back(Interval{0, bytes});
      update_peak_bookkeeping(state);

      by_label_.emplace(state.label, domains_.size());
      by_key_.emplace(static_cast<std::uint32_t>(state.key), domains_.size());
      domains_.push_back(std::move(state));
    }
  } catch (...) {
    release_all();
    unregister_manager(!backend_->per_thread());
    throw;
  }
}

DomainManager::~DomainManager() {
  if (!torn_down_) {
    release_all();
    unregister_manager(!backend_->per_thread());
  }
}

void DomainManager::release_all() noexcept {
  for (DomainState& d : domains_) {
    if (d.base != nullptr) {
      try {
        backend_->untag_region(d.base, d.pages, d.key);
        backend_->release_key(d.key);
      } catch (...) {
      }
      munmap(d.base, d.pages * kPageSize);
      d.base = nullptr;
    }
  }
}

void DomainManager::teardown() {
  if (torn_down_) {
    throw Error(Errc::not_initialized, "manager already torn down");
  }
  if (live_frames_.load() != 0) {
    throw Error(Errc::active_sandbox, "teardown with an open execution sandbox");
  }
  release_all();
  torn_down_ = true;
  unregister_manager(!backend_->per_thread());
}

DomainManager::DomainState& DomainManager::state_for(std::string_view domain) {
  auto it = by_label_.find(std::string(domain));
  if (it == by_label_.end()) {
    throw Error(Errc::no_such_domain, "no domain '" + std::string(domain) + "'");
  }
  return domains_[it->second];
}

const DomainManager::DomainState& DomainManager::state_for(std::string_view domain) const {
  auto it = by_label_.find(std::string(domain));
  if (it == by_label_.end()) {
    throw Error(Errc::no_such_domain, "no domain '" + std::string(domain) + "'");
  }
  return domains_[it->second];
}

DomainManager::DomainState& DomainManager::state_for_key(std::uint32_t key, const char* what) {
  auto it = by_key_.find(key);
  if (it == by_key_.end()) {
    throw Error(Errc::unknown_handle, std::string(what) + ": handle key is not a domain key");
  }
  return domains_[it->second];
}

void DomainManager::update_peak_bookkeeping(DomainState& d) {
  std::size_t current = sizeof(DomainState) + d.label.size() +
                        d.free_list.size() * sizeof(Interval) +
                        d.live.size() * kLiveMapEntryCost;
  d.peak_bookkeeping = std::max(d.peak_bookkeeping, current);
}

ObjectHandle DomainManager::alloc(std::string_view domain, std::size_t size) {
  std::lock_guard lock(alloc_mutex_);
  DomainState& d = state_for(domain);
  if (size == 0) {
    throw Error(Errc::bad_size, "allocation size must be > 0");
  }
  bool startup = startup_phase_.load();
  if (!startup && !allows_write(backend_->thread_access(d.key))) {
    throw Error(Errc::no_active_grant,
                "allocation in '" + d.label + "' requires a ReadWrite grant");
  }

  // First fit over the sorted free list; allocations start 16-byte aligned
  // and consume exactly `size` bytes.
  for (std::size_t i = 0; i < d.free_list.size(); ++i) {
    Interval iv = d.free_list[i];
    std::size_t start = align_up(iv.offset, kAllocAlign);
    if (start + size > iv.offset + iv.size) continue;

    d.free_list.erase(d.free_list.begin() + static_cast<std::ptrdiff_t>(i));
    auto insert_free = [&](Interval piece) {
      if (piece.size == 0) return;
      auto pos = std::lower_bound(
          d.free_list.begin(), d.free_list.end(), piece,
          [](const Interval& a, const Interval& b) { return a.offset < b.offset; });
      d.free_list.insert(pos, piece);
    };
    insert_free(Interval{iv.offset, start - iv.offset});
    insert_free(Interval{start + size, iv.offset + iv.size - start - size});

    ObjectHandle handle;
    handle.key_id = static_cast<std::uint32_t>(d.key);
    handle.id = d.next_id++;
    handle.size = size;
    d.live.emplace(handle.id, Interval{start, size});
    d.live_bytes += size;
    d.high_water = std::max(d.high_water, d.live_bytes);

    if (startup && !allows_write(backend_->thread_access(d.key))) {
      // Transient internal grant: startup allocations happen before any
      // sandbox exists, so elevate just long enough to zero the region.
      backend_->set_thread_access(d.key, AccessMode::ReadWrite);
      std::memset(d.base + start, 0, size);
      backend_->set_thread_access(d.key, AccessMode::None);
    } else {
      std::memset(d.base + start, 0, size);
    }
    update_peak_bookkeeping(d);
    return handle;
  }
  throw Error(Errc::pool_exhausted,
              "no room for " + std::to_string(size) + " bytes in '" + d.label + "'");
}

void DomainManager::free(std::string_view domain, const ObjectHandle& handle) {
  std::lock_guard lock(alloc_mutex_);
  DomainState& d = state_for(domain);
  if (handle.key_id != static_cast<std::uint32_t>(d.key) || handle.id == 0 ||
      handle.id >= d.next_id) {
    throw Error(Errc::unknown_handle, "handle does not belong to '" + d.label + "'");
  }
  auto it = d.live.find(handle.id);
  if (it == d.live.end()) {
    throw Error(Errc::double_free, "handle already freed");
  }
  Interval freed = it->second;
  d.live.erase(it);
  d.live_bytes -= freed.size;

  if (backend_->software_checked()) {
    // Deterministic use-after-free detection in the software model.
    std::memset(d.base + freed.offset, static_cast<int>(kFreePoison), freed.size);
  }

  auto pos = std::lower_bound(
      d.free_list.begin(), d.free_list.end(), freed,
      [](const Interval& a, const Interval& b) { return a.offset < b.offset; });
  pos = d.free_list.insert(pos, freed);
  // Coalesce with the right neighbor, then the left.
  if (auto next = pos + 1;
      next != d.free_list.end() && pos->offset + pos->size == next->offset) {
    pos->size += next->size;
    d.free_list.erase(next);
  }
  if (pos != d.free_list.begin()) {
    auto prev = pos - 1;
    if (prev->offset + prev->size == pos->offset) {
      prev->size += pos->size;
      d.free_list.erase(pos);
    }
  }
  update_peak_bookkeeping(d);
}

void DomainManager::set_access(int key, AccessMode mode) {
  if (key == kDefaultKey) {
    throw Error(Errc::bad_key, "key 0 is the default key and is immutable");
  }
  if (!by_key_.contains(static_cast<std::uint32_t>(key))) {
    throw Error(Errc::bad_key, "key " + std::to_string(key) + " is not provisioned");
  }
  backend_->set_thread_access(key, mode);
}

AccessMode DomainManager::thread_access(int key) const {
  return backend_->thread_access(key);
}

void DomainManager::record(int key, AccessMode requested, bool allowed) {
  std::lock_guard lock(trace_mutex_);
  if (trace_enabled_) trace_.push_back(AccessEvent{key, requested, allowed});
}

const DomainManager::Interval& DomainManager::live_interval(const DomainState& d,
                                                            const ObjectHandle& h,
                                                            std::size_t offset,
                                                            std::size_t len) const {
  auto it = d.live.find(h.id);
  if (it == d.live.end()) {
    throw Error(Errc::unknown_handle, "stale or foreign handle");
  }
  if (offset + len > it->second.size) {
    throw Error(Errc::size_exceeded, "access past the end of the allocation");
  }
  return it->second;
}

void DomainManager::read_bytes(const ObjectHandle& handle, std::size_t offset,
                               std::span<std::byte> out) {
  std::lock_guard lock(alloc_mutex_);
  DomainState& d = state_for_key(handle.key_id, "read");
  const Interval& iv = live_interval(d, handle, offset, out.size());
  if (backend_->software_checked()) {
    bool ok = allows_read(backend_->thread_access(d.key));
    record(d.key, AccessMode::ReadOnly, ok);
    if (!ok) {
      throw IsolationFault("read of domain '" + d.label + "' denied");
    }
  } else {
    record(d.key, AccessMode::ReadOnly, true);
  }
  std::memcpy(out.data(), d.base + iv.offset + offset, out.size());
}

void DomainManager::write_bytes(const ObjectHandle& handle, std::size_t offset,
                                std::span<const std::byte> in) {
  std::lock_guard lock(alloc_mutex_);
  DomainState& d = state_for_key(handle.key_id, "write");
  const Interval& iv = live_interval(d, handle, offset, in.size());
  if (backend_->software_checked()) {
    bool ok = allows_write(backend_->thread_access(d.key));
    record(d.key, AccessMode::ReadWrite, ok);
    if (!ok) {
      throw IsolationFault("write to domain '" + d.label + "' denied");
    }
  } else {
    record(d.key, AccessMode::ReadWrite, true);
  }
  std::memcpy(d.base + iv.offset + offset, in.data(), in.size());
}

Verdict DomainManager::try_read(const ObjectHandle& handle, std::size_t offset,
                                std::span<std::byte> out) {
  std::lock_guard lock(alloc_mutex_);
  DomainState& d = state_for_key(handle.key_id, "read");
  const Interval& iv = live_interval(d, handle, offset, out.size());
  bool ok;
  if (backend_->software_checked()) {
    ok = allows_read(backend_->thread_access(d.key));
    if (ok) std::memcpy(out.data(), d.base + iv.offset + offset, out.size());
  } else {
    ok = detail::guarded_read(d.base + iv.offset + offset, out.data(), out.size());
  }
  record(d.key, AccessMode::ReadOnly, ok);
  return ok ? Verdict::Allowed : Verdict::Denied;
}

Verdict DomainManager::try_write(const ObjectHandle& handle, std::size_t offset,
                                 std::span<const std::byte> in) {
  std::lock_guard lock(alloc_mutex_);
  DomainState& d = state_for_key(handle.key_id, "write");
  const Interval& iv = live_interval(d, handle, offset, in.size());
  bool ok;
  if (backend_->software_checked()) {
    ok = allows_write(backend_->thread_access(d.key));
    if (ok) std::memcpy(d.base + iv.offset + offset, in.data(), in.size());
  } else {
    ok = detail::guarded_write(d.base + iv.offset + offset, in.data(), in.size());
  }
  record(d.key, AccessMode::ReadWrite, ok);
  return ok ? Verdict::Allowed : Verdict::Denied;
}

std::vector<DomainInfo> DomainManager::domains() const {
  std::lock_guard lock(alloc_mutex_);
  std::vector<DomainInfo> infos;
  infos.reserve(domains_.size());
  for (const DomainState& d : domains_) {
    infos.push_back(DomainInfo{d.label, d.key, d.pages, d.pages * kPageSize, d.live_bytes,
                               d.high_water});
  }
  return infos;
}

DomainInfo DomainManager::domain_info(std::string_view domain) const {
  std::lock_guard lock(alloc_mutex_);
  const DomainState& d = state_for(domain);
  return DomainInfo{d.label, d.key, d.pages, d.pages * kPageSize, d.live_bytes, d.high_water};
}

int DomainManager::key_of(std::string_view domain) const { return state_for(domain).key; }

std::vector<int> DomainManager::provisioned_keys() const {
  std::vector<int> keys;
  keys.reserve(domains_.size());
  for (const DomainState& d : domains_) keys.push_back(d.key);
  return keys;
}

std::size_t DomainManager::allocation_offset(const ObjectHandle& handle) const {
  std::lock_guard lock(alloc_mutex_);
  auto it = by_key_.find(handle.key_id);
  if (it == by_key_.end()) {
    throw Error(Errc::unknown_handle, "handle key is not a domain key");
  }
  const DomainState& d = domains_[it->second];
  auto live = d.live.find(handle.id);
  if (live == d.live.end()) {
    throw Error(Errc::unknown_handle, "handle is not live");
  }
  return live->second.offset;
}

std::span<const std::byte> DomainManager::unchecked_pool_bytes(std::string_view domain) const {
  const DomainState& d = state_for(domain);
  return {d.base, d.pages * kPageSize};
}

std::size_t DomainManager::bookkeeping_bytes(std::string_view domain) const {
  std::lock_guard lock(alloc_mutex_);
  const DomainState& d = state_for(domain);
  return sizeof(DomainState) + d.label.size() + d.free_list.size() * sizeof(Interval) +
         d.live.size() * kLiveMapEntryCost;
}

std::size_t DomainManager::peak_bookkeeping_bytes(std::string_view domain) const {
  std::lock_guard lock(alloc_mutex_);
  return state_for(domain).peak_bookkeeping;
}

void DomainManager::enable_access_trace(bool enabled) {
  std::lock_guard lock(trace_mutex_);
  trace_enabled_ = enabled;
  if (!enabled) trace_.clear();
}

std::vector<AccessEvent> DomainManager::take_access_trace() {
  std::lock_guard lock(trace_mutex_);
  std::vector<AccessEvent> out;
  out.swap(trace_);
  return out;
}

}  // namespace enclavedom
