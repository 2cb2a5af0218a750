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
// A self-contained mini-libOS over an in-memory file tree. Its management
// metadata is what the isolation protects: the file-descriptor table lives
// in handle_dom and mount/name metadata lives in fs_dom, while file content
// stays in ordinary untagged memory. Every syscall runs inside an execution
// sandbox granting exactly the domains it needs.

#ifndef ENCLAVEDOM_MINIOS_HPP_
#define ENCLAVEDOM_MINIOS_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "enclavedom/backend.hpp"
#include "enclavedom/monitor.hpp"

namespace enclavedom {

enum class VfsErrc {
  no_ent,
  bad_fd,
  exists,
  not_dir,
  too_many_fds,
};

const char* vfs_errc_name(VfsErrc code) noexcept;

class VfsError : public std::runtime_error {
 public:
  VfsError(VfsErrc code, const std::string& message)
      : std::runtime_error(std::string(vfs_errc_name(code)) + ": " + message), code_(code) {}

  VfsErrc code() const noexcept { return code_; }

 private:
  VfsErrc code_;
};

enum class VnodeKind : std::uint16_t {
  File = 1,
  Dir = 2,
};

struct StatBuf {
  std::uint32_t vnode = 0;
  VnodeKind kind = VnodeKind::File;
  std::uint64_t size = 0;
  std::uint32_t links = 0;
  std::uint32_t dev = 0;  // governing mount slot
};

// open() flag bits
inline constexpr unsigned kOpenRead = 1u << 0;
inline constexpr unsigned kOpenWrite = 1u << 1;
inline constexpr unsigned kOpenCreate = 1u << 2;

enum class AttackOutcome {
  Succeeded,  // forged vnode id landed; read(fd) returns attacker content
  Denied,     // write refused by the monitor
};

enum class AttackVariant {
  /// Write the fd table through an internal location accessor, outside any
  /// sandbox ("reverse-engineered code path").
  RawWrite,
  /// Hijack a callback inside a close() sandbox and write fs_dom from
  /// there; close grants only handle_dom, so the deputy's privileges do
  /// not extend to the forged write.
  HijackedCallback,
};

inline constexpr int kHandleSlots = 64;

/// Demo policy used by the mini-libOS (also checked into fixtures/).
std::string_view minios_demo_policy() noexcept;

class MiniOs {
 public:
  struct Options {
    BackendKind backend = BackendKind::Checked;
    /// false = "vanilla" mode: the monitor is disabled and every domain
    /// key is left ReadWrite, modeling an unprotected libOS.
    bool protected_mode = true;
    /// Policy source; empty = the built-in demo policy.
    std::string policy_text;
  };

  explicit MiniOs(const Options& options);
  ~MiniOs();

  MiniOs(const MiniOs&) = delete;
  MiniOs& operator=(const MiniOs&) = delete;

  int open(std::string_view path, unsigned flags);
  void close(int fd);
  StatBuf stat(std::string_view path);
  StatBuf fstat(int fd);
  std::uint64_t mmap_anon(std::size_t length);
  std::vector<std::byte> read(int fd, std::size_t count);
  std::size_t write(int fd, std::span<const std::byte> data);
  void mkdir(std::string_view path);
  void unlink(std::string_view path);
  void mount(std::string_view path);

  /// Simulate the malicious imported library: forge the vnode id of an
  /// in-use fd-table slot without going through a sandboxed syscall.
  /// In vanilla mode the write lands; in protected mode the checked
  /// backend denies it and hardware backends fault the process.
  AttackOutcome run_fd_table_attack(AttackVariant variant = AttackVariant::RawWrite);

  Monitor& monitor() noexcept { return *monitor_; }
  DomainManager& domains() noexcept { return monitor_->domains(); }
  bool protected_mode() const noexcept { return protected_; }

#ifdef ENCLAVEDOM_ENABLE_ATTACK_DEMO
  struct Internals;
  friend struct Internals;
#endif

 private:
  struct HandleSlot;      // fd table entry (handle_dom)
  struct RegionRecord;    // mmap accounting entry (handle_dom)
  struct MountEntry;      // mount table entry (fs_dom)
  struct NameEntry;       // path -> vnode index entry (fs_dom)

  struct Vnode {
    std::uint32_t id = 0;
    VnodeKind kind = VnodeKind::File;
    std::vector<std::byte> content;  // untagged; file content is not the protected asset
  };

  template <typename F>
  auto call(std::string_view func, F&& body);

  // Raw syscall bodies, runnable outside a sandbox for the confused-deputy
  // experiments. All metadata access inside them is mediated.
  int open_body(std::string_view path, unsigned flags);
  void close_body(int fd);
  StatBuf stat_body(std::string_view path);
  StatBuf fstat_body(int fd);
  std::uint64_t mmap_anon_body(std::size_t length);
  std::vector<std::byte> read_body(int fd, std::size_t count);
  std::size_t write_body(int fd, std::span<const std::byte> data);
  void mkdir_body(std::string_view path);
  void unlink_body(std::string_view path);
  void mount_body(std::string_view path);

  void boot();
  static std::string normalize_path(std::string_view path);
  static std::string parent_of(std::string_view normalized);

  static std::size_t slot_offset(int fd);
  static std::size_t region_offset(int index);
  static std::size_t mount_offset(int index);
  static std::size_t name_offset(int index);

  HandleSlot load_slot(int fd);
  void store_slot(int fd, const HandleSlot& slot);
  NameEntry load_name(int index);
  void store_name(int index, const NameEntry& entry);
  MountEntry load_mount(int index);
  void store_mount(int index, const MountEntry& entry);
  int find_name(std::string_view normalized);  // -1 if absent
  int free_name_index();
  Vnode& vnode_ref(std::uint32_t id);
  std::uint32_t new_vnode(VnodeKind kind);

  std::unique_ptr<Monitor> monitor_;
  bool protected_ = true;
  ObjectHandle handle_table_;
  ObjectHandle region_table_;
  ObjectHandle fs_meta_;
  std::vector<Vnode> vnodes_;
  std::unordered_map<std::uint64_t, std::vector<std::byte>> region_buffers_;
  std::function<void()> close_hook_;  // test-only hijack point, see Internals
};

}  // namespace enclavedom

#endif  // ENCLAVEDOM_MINIOS_HPP_
