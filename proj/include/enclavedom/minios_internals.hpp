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
// Deliberately exported internal location accessors. These model what a
// malicious in-process library obtains by sharing the address space:
// the locations of the libOS management tables, reachable without going
// through any sandboxed syscall. Compiled only when the attack demo is
// enabled; nothing in the normal API depends on this header.

#ifndef ENCLAVEDOM_MINIOS_INTERNALS_HPP_
#define ENCLAVEDOM_MINIOS_INTERNALS_HPP_

#ifdef ENCLAVEDOM_ENABLE_ATTACK_DEMO

#include <cstddef>
#include <functional>
#include <span>

#include "enclavedom/minios.hpp"

namespace enclavedom {

struct MiniOs::Internals {
  static ObjectHandle handle_table(MiniOs& os) { return os.handle_table_; }
  static ObjectHandle fs_meta(MiniOs& os) { return os.fs_meta_; }

  /// Raw (unmediated) view of a domain pool, for byte-level comparison in
  /// differential tests.
  static std::span<const std::byte> pool_bytes(MiniOs& os, std::string_view domain) {
    return os.domains().unchecked_pool_bytes(domain);
  }

  /// Byte offset of the vnode-id field of fd slot `fd` inside the
  /// handle-table object.
  static std::size_t slot_vnode_offset(int fd);

  /// Byte offset of mount entry `index` inside the fs-meta object.
  static std::size_t mount_entry_offset(int index);

  /// Install a hook that close() invokes mid-syscall; models a hijacked
  /// callback running inside the close sandbox.
  static void set_close_hook(MiniOs& os, std::function<void()> hook) {
    os.close_hook_ = std::move(hook);
  }

  /// Unsandboxed raw syscall bodies (privileged code invoked without its
  /// wrapper).
  static StatBuf raw_stat(MiniOs& os, std::string_view path) { return os.stat_body(path); }
  static int raw_open(MiniOs& os, std::string_view path, unsigned flags) {
    return os.open_body(path, flags);
  }
};

}  // namespace enclavedom

#endif  // ENCLAVEDOM_ENABLE_ATTACK_DEMO

#endif  // ENCLAVEDOM_MINIOS_INTERNALS_HPP_
