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

#include "enclavedom/monitor.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "enclavedom/error.hpp"

namespace enclavedom {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t ns_since(Clock::time_point start) {
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count());
}

}  // namespace

GrantTable::GrantTable(const Acl& acl, const DomainManager& domains) {
  for (const AccessRule& rule : acl.rules) {
    GrantEntry entry;
    std::set<int> ro;
    std::set<int> rw;
    std::set<std::string> sized_seen;
    for (const ObjectSpec& spec : rule.outputs) {
      rw.insert(domains.key_of(spec.domain_label));
    }
    for (const ObjectSpec& spec : rule.inputs) {
      int key = domains.key_of(spec.domain_label);
      // A key cannot be both read-only and read-write at once; the wider
      // grant wins.
      if (!rw.contains(key)) ro.insert(key);
    }
    for (const auto* side : {&rule.inputs, &rule.outputs}) {
      for (const ObjectSpec& spec : *side) {
        if (!spec.blanket() && spec.declared_size && sized_seen.insert(*spec.object_label).second) {
          entry.sized_objects.push_back(SizedObject{*spec.object_label, *spec.declared_size});
        }
      }
    }
    entry.ro_keys.assign(ro.begin(), ro.end());
    entry.rw_keys.assign(rw.begin(), rw.end());
    entries_.emplace(rule.func_name, std::move(entry));
  }
}

const GrantEntry* GrantTable::find(std::string_view func) const {
  auto it = entries_.find(std::string(func));
  return it == entries_.end() ? nullptr : &it->second;
}

std::size_t GrantTable::footprint_bytes() const {
  std::size_t total = sizeof(*this);
  for (const auto& [name, entry] : entries_) {
    total += sizeof(entry) + name.size() + 2 * sizeof(void*);
    total += entry.ro_keys.capacity() * sizeof(int);
    total += entry.rw_keys.capacity() * sizeof(int);
    for (const SizedObject& so : entry.sized_objects) {
      total += sizeof(so) + so.label.size();
    }
  }
  return total;
}

Monitor::Monitor(Acl acl, std::unique_ptr<Backend> backend)
    : acl_(std::move(acl)), manager_(std::make_unique<DomainManager>(acl_, std::move(backend))) {
  grants_ = GrantTable(acl_, *manager_);
  for (const ObjectDecl& object : acl_.objects) {
    ObjectState state;
    state.domain_label = object.domain_label;
    state.declared_size = object.declared_size;
    objects_.emplace(object.label, std::move(state));
  }
}

void Monitor::set_all_keys(AccessMode mode) {
  for (int key : manager_->provisioned_keys()) {
    manager_->set_access(key, mode);
  }
}

SandboxFrame Monitor::grant_data_access(std::string_view func_name) {
  auto start = Clock::now();
  const GrantEntry* entry = grants_.find(func_name);
  if (entry == nullptr) {
    // Default-deny: a function with no rule gets no sandbox at all.
    throw Error(Errc::unknown_function,
                "no access rule for '" + std::string(func_name) + "'");
  }

  SandboxFrame frame;
  frame.func_name = std::string(func_name);
  frame.thread = std::this_thread::get_id();
  {
    std::lock_guard lock(frames_mutex_);
    std::vector<FrameRecord>& stack = frames_[frame.thread];
    if (static_cast<int>(stack.size()) >= kMaxSandboxDepth) {
      throw Error(Errc::nested_limit, "sandbox depth limit reached");
    }
    frame.token = next_token_++;
    frame.depth = static_cast<int>(stack.size());
    stack.push_back(FrameRecord{frame.token, frame.func_name});
    peak_depth_ = std::max(peak_depth_, stack.size());
  }
  manager_->note_frame_opened();
  manager_->end_startup_phase();

  for (int key : manager_->provisioned_keys()) {
    AccessMode mode = AccessMode::None;
    if (std::binary_search(entry->rw_keys.begin(), entry->rw_keys.end(), key)) {
      mode = AccessMode::ReadWrite;
    } else if (std::binary_search(entry->ro_keys.begin(), entry->ro_keys.end(), key)) {
      mode = AccessMode::ReadOnly;
    }
    manager_->set_access(key, mode);
  }

  if (timing_enabled_) {
    timers_.grant_ns += ns_since(start);
    ++timers_.grants;
  }
  return frame;
}

void Monitor::revoke_data_access(const SandboxFrame& frame) {
  auto start = Clock::now();
  std::thread::id self = std::this_thread::get_id();
  if (frame.thread != self) {
    throw Error(Errc::wrong_thread, "frame belongs to another thread");
  }
  {
    std::lock_guard lock(frames_mutex_);
    auto it = frames_.find(self);
    if (it == frames_.end() || it->second.empty() || it->second.back().token != frame.token) {
      throw Error(Errc::frame_order_violation,
                  "frame for '" + frame.func_name + "' is not top of stack");
    }
    it->second.pop_back();
  }
  // Conservative exit: no assumption about what runs next, so every
  // provisioned key drops to None rather than to the outer frame's modes.
  set_all_keys(AccessMode::None);
  manager_->note_frame_closed();

  if (timing_enabled_) {
    timers_.revoke_ns += ns_since(start);
    ++timers_.revokes;
  }
}

Monitor::ObjectState& Monitor::object_state(std::string_view label, const char* what) {
  auto it = objects_.find(std::string(label));
  if (it == objects_.end()) {
    throw Error(Errc::unknown_object,
                std::string(what) + ": no object '" + std::string(label) + "' in the ACL");
  }
  return it->second;
}

const Monitor::ObjectState& Monitor::object_state(std::string_view label,
                                                  const char* what) const {
  auto it = objects_.find(std::string(label));
  if (it == objects_.end()) {
    throw Error(Errc::unknown_object,
                std::string(what) + ": no object '" + std::string(label) + "' in the ACL");
  }
  return it->second;
}

void Monitor::check_input_size(std::string_view object_label, std::uint64_t size) {
  auto start = Clock::now();
  const ObjectState& object = object_state(object_label, "check_input_size");
  if (object.declared_size && size > *object.declared_size) {
    throw Error(Errc::size_exceeded,
                std::to_string(size) + " bytes exceeds declared size " +
                    std::to_string(*object.declared_size) + " of '" +
                    std::string(object_label) + "'");
  }
  if (timing_enabled_) {
    timers_.check_ns += ns_since(start);
    ++timers_.checks;
  }
}

void Monitor::check_output_size(std::string_view object_label, std::uint64_t size) {
  check_input_size(object_label, size);
}

ObjectHandle Monitor::allocate_object(std::string_view object_label, std::uint64_t size) {
  ObjectState& object = object_state(object_label, "allocate_object");
  if (object.declared_size && size > *object.declared_size) {
    throw Error(Errc::size_exceeded, "allocation larger than the object's declared size");
  }
  object.handle = manager_->alloc(object.domain_label, size);
  object.allocated = true;
  return object.handle;
}

ObjectHandle Monitor::object_handle(std::string_view object_label) const {
  const ObjectState& object = object_state(object_label, "object_handle");
  if (!object.allocated) {
    throw Error(Errc::not_allocated, "object '" + std::string(object_label) + "' not allocated");
  }
  return object.handle;
}

void Monitor::copy_from_untrusted(std::string_view object_label,
                                  std::span<const std::byte> source) {
  const ObjectState& object = object_state(object_label, "copy_from_untrusted");
  if (!object.allocated) {
    throw Error(Errc::not_allocated, "object '" + std::string(object_label) + "' not allocated");
  }
  check_input_size(object_label, source.size());
  if (source.size() > object.handle.size) {
    throw Error(Errc::size_exceeded, "source larger than the object's allocation");
  }
  int key = manager_->key_of(object.domain_label);
  if (!allows_write(manager_->thread_access(key))) {
    throw Error(Errc::no_active_grant,
                "copy_from_untrusted requires an active ReadWrite grant on '" +
                    object.domain_label + "'");
  }
  manager_->write_bytes(object.handle, 0, source);
}

void Monitor::copy_to_untrusted(std::string_view object_label, std::span<std::byte> dest) {
  const ObjectState& object = object_state(object_label, "copy_to_untrusted");
  if (!object.allocated) {
    throw Error(Errc::not_allocated, "object '" + std::string(object_label) + "' not allocated");
  }
  if (dest.size() < object.handle.size) {
    throw Error(Errc::size_exceeded, "destination smaller than the object");
  }
  int key = manager_->key_of(object.domain_label);
  if (!allows_read(manager_->thread_access(key))) {
    // Exporting needs read access, not write.
    throw Error(Errc::no_active_grant,
                "copy_to_untrusted requires an active grant on '" + object.domain_label + "'");
  }
  manager_->read_bytes(object.handle, 0, dest.subspan(0, object.handle.size));
}

void Monitor::teardown() { manager_->teardown(); }

int Monitor::depth() const {
  std::lock_guard lock(frames_mutex_);
  auto it = frames_.find(std::this_thread::get_id());
  return it == frames_.end() ? 0 : static_cast<int>(it->second.size());
}

std::size_t Monitor::object_registry_bytes() const {
  std::size_t total = 0;
  for (const auto& [label, object] : objects_) {
    total += sizeof(object) + label.size() + object.domain_label.size() + 2 * sizeof(void*);
  }
  return total;
}

std::size_t Monitor::frame_stack_peak_bytes() const {
  return peak_depth_ * (sizeof(FrameRecord) + 16);  // 16 ~= stored name bytes
}

std::size_t Monitor::footprint_bytes() const {
  return grants_.footprint_bytes() + object_registry_bytes() + frame_stack_peak_bytes();
}

}  // namespace enclavedom
