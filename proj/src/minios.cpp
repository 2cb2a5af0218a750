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

#include "enclavedom/minios.hpp"

#include <algorithm>
#include <cstddef>
#include <cstring>

#include "enclavedom/error.hpp"
#include "enclavedom/policy.hpp"

#ifdef ENCLAVEDOM_ENABLE_ATTACK_DEMO
#include "enclavedom/minios_internals.hpp"
#endif

namespace enclavedom {

namespace {

constexpr int kMountSlots = 8;
constexpr int kNameSlots = 120;
constexpr int kRegionSlots = 16;
constexpr std::size_t kMaxPath = 63;  // fixed-size table fields, NUL-terminated

constexpr std::string_view kDemoPolicy =
    R"(// Mini-libOS privilege isolation policy.
// handle_dom holds the fd table and mapping records; fs_dom holds the
// mount table and the path name index.
domain handle_dom pages=4
domain fs_dom pages=4

> minios_boot > #handle_dom:, #fs_dom:
> open > #handle_dom:, #fs_dom:
> close > #handle_dom:
#fs_dom: > stat >
#handle_dom:, #fs_dom: > fstat >
> mmap_anon > #handle_dom:
#fs_dom: > read > #handle_dom:
#fs_dom: > write > #handle_dom:
> mkdir > #fs_dom:
> unlink > #fs_dom:, #handle_dom:
> mount > #fs_dom:
)";

void copy_path(char (&dest)[64], std::string_view path) {
  std::memset(dest, 0, sizeof(dest));
  std::memcpy(dest, path.data(), std::min(path.size(), kMaxPath));
}

}  // namespace

const char* vfs_errc_name(VfsErrc code) noexcept {
  switch (code) {
    case VfsErrc::no_ent: return "NoEnt";
    case VfsErrc::bad_fd: return "BadFd";
    case VfsErrc::exists: return "Exists";
    case VfsErrc::not_dir: return "NotDir";
    case VfsErrc::too_many_fds: return "TooManyFds";
  }
  return "VfsError";
}

std::string_view minios_demo_policy() noexcept { return kDemoPolicy; }

// Fixed-layout metadata records. These are the protected assets; they are
// read and written only through mediated domain access.
struct MiniOs::HandleSlot {
  std::uint32_t in_use;
  std::uint32_t vnode;
  std::uint64_t offset;
  std::uint32_t mode;
  std::uint32_t pad;
};

struct MiniOs::RegionRecord {
  std::uint64_t id;  // 0 = slot unused
  std::uint64_t length;
};

struct MiniOs::MountEntry {
  char path[64];
  std::uint32_t root_vnode;
  std::uint32_t in_use;
};

struct MiniOs::NameEntry {
  char path[64];
  std::uint32_t vnode;
  std::uint16_t kind;
  std::uint16_t in_use;
};

namespace {
constexpr std::size_t kRegionHeaderBytes = 16;  // u64 next_id + u64 reserved
}  // namespace

std::size_t MiniOs::slot_offset(int fd) {
  // Fixed record sizes keep the table layouts identical across builds, so
  // differential byte comparisons are meaningful.
  static_assert(sizeof(HandleSlot) == 24);
  static_assert(sizeof(RegionRecord) == 16);
  static_assert(sizeof(MountEntry) == 72);
  static_assert(sizeof(NameEntry) == 72);
  return static_cast<std::size_t>(fd) * sizeof(HandleSlot);
}

std::size_t MiniOs::region_offset(int index) {
  return kRegionHeaderBytes + static_cast<std::size_t>(index) * sizeof(RegionRecord);
}

std::size_t MiniOs::mount_offset(int index) {
  return static_cast<std::size_t>(index) * sizeof(MountEntry);
}

std::size_t MiniOs::name_offset(int index) {
  return static_cast<std::size_t>(kMountSlots) * sizeof(MountEntry) +
         static_cast<std::size_t>(index) * sizeof(NameEntry);
}

template <typename F>
auto MiniOs::call(std::string_view func, F&& body) {
  if (protected_) {
    return monitor_->sandboxed_call(func, std::forward<F>(body));
  }
  return std::forward<F>(body)();
}

namespace {

template <typename T>
T dm_read(DomainManager& dm, const ObjectHandle& handle, std::size_t offset) {
  static_assert(std::is_trivially_copyable_v<T>);
  T value;
  dm.read_bytes(handle, offset, std::as_writable_bytes(std::span(&value, 1)));
  return value;
}

template <typename T>
void dm_write(DomainManager& dm, const ObjectHandle& handle, std::size_t offset,
              const T& value) {
  static_assert(std::is_trivially_copyable_v<T>);
  dm.write_bytes(handle, offset, std::as_bytes(std::span(&value, 1)));
}

}  // namespace

MiniOs::MiniOs(const Options& options) : protected_(options.protected_mode) {
  std::string_view policy =
      options.policy_text.empty() ? minios_demo_policy() : std::string_view(options.policy_text);
  monitor_ = std::make_unique<Monitor>(parse_policy(policy), make_backend(options.backend));

  // Startup-phase table allocation; population happens inside the boot
  // sandbox below.
  handle_table_ = domains().alloc("handle_dom", kHandleSlots * sizeof(HandleSlot));
  region_table_ =
      domains().alloc("handle_dom", kRegionHeaderBytes + kRegionSlots * sizeof(RegionRecord));
  fs_meta_ = domains().alloc(
      "fs_dom", kMountSlots * sizeof(MountEntry) + kNameSlots * sizeof(NameEntry));

  if (protected_) {
    monitor_->sandboxed_call("minios_boot", [&] { boot(); });
  } else {
    // Vanilla mode: no monitor enforcement, every domain left read-write.
    for (int key : domains().provisioned_keys()) {
      domains().set_access(key, AccessMode::ReadWrite);
    }
    boot();
  }
}

MiniOs::~MiniOs() = default;

void MiniOs::boot() {
  std::uint32_t root = new_vnode(VnodeKind::Dir);
  NameEntry root_name{};
  copy_path(root_name.path, "/");
  root_name.vnode = root;
  root_name.kind = static_cast<std::uint16_t>(VnodeKind::Dir);
  root_name.in_use = 1;
  store_name(0, root_name);

  MountEntry root_mount{};
  copy_path(root_mount.path, "/");
  root_mount.root_vnode = root;
  root_mount.in_use = 1;
  store_mount(0, root_mount);
}

std::string MiniOs::normalize_path(std::string_view path) {
  if (path.empty() || path.front() != '/') {
    throw VfsError(VfsErrc::no_ent, "path must be absolute");
  }
  std::string out = "/";
  std::size_t pos = 1;
  while (pos <= path.size()) {
    std::size_t next = path.find('/', pos);
    std::string_view part =
        path.substr(pos, next == std::string_view::npos ? path.size() - pos : next - pos);
    if (!part.empty()) {
      if (part == "." || part == "..") {
        throw VfsError(VfsErrc::no_ent, "relative path components are not supported");
      }
      if (out.size() > 1) out += '/';
      out += part;
    }
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  if (out.size() > kMaxPath) {
    throw VfsError(VfsErrc::no_ent, "path too long");
  }
  return out;
}

std::string MiniOs::parent_of(std::string_view normalized) {
  if (normalized == "/") return "";
  std::size_t slash = normalized.rfind('/');
  return slash == 0 ? "/" : std::string(normalized.substr(0, slash));
}

MiniOs::HandleSlot MiniOs::load_slot(int fd) {
  return dm_read<HandleSlot>(domains(), handle_table_, slot_offset(fd));
}

void MiniOs::store_slot(int fd, const HandleSlot& slot) {
  dm_write(domains(), handle_table_, slot_offset(fd), slot);
}

MiniOs::NameEntry MiniOs::load_name(int index) {
  return dm_read<NameEntry>(domains(), fs_meta_, name_offset(index));
}

void MiniOs::store_name(int index, const NameEntry& entry) {
  dm_write(domains(), fs_meta_, name_offset(index), entry);
}

MiniOs::MountEntry MiniOs::load_mount(int index) {
  return dm_read<MountEntry>(domains(), fs_meta_, mount_offset(index));
}

void MiniOs::store_mount(int index, const MountEntry& entry) {
  dm_write(domains(), fs_meta_, mount_offset(index), entry);
}

int MiniOs::find_name(std::string_view normalized) {
  for (int i = 0; i < kNameSlots; ++i) {
    NameEntry entry = load_name(i);
    if (entry.in_use && normalized == entry.path) return i;
  }
  return -1;
}

int MiniOs::free_name_index() {
  for (int i = 0; i < kNameSlots; ++i) {
    if (!load_name(i).in_use) return i;
  }
  throw VfsError(VfsErrc::too_many_fds, "name table full");
}

MiniOs::Vnode& MiniOs::vnode_ref(std::uint32_t id) {
  return vnodes_.at(id - 1);  // ids are 1-based; 0 is invalid
}

std::uint32_t MiniOs::new_vnode(VnodeKind kind) {
  Vnode vnode;
  vnode.id = static_cast<std::uint32_t>(vnodes_.size()) + 1;
  vnode.kind = kind;
  vnodes_.push_back(std::move(vnode));
  return vnodes_.back().id;
}

// ---- syscall surface -------------------------------------------------

int MiniOs::open(std::string_view path, unsigned flags) {
  return call("open", [&] { return open_body(path, flags); });
}

void MiniOs::close(int fd) {
  call("close", [&] { close_body(fd); });
}

StatBuf MiniOs::stat(std::string_view path) {
  return call("stat", [&] { return stat_body(path); });
}

StatBuf MiniOs::fstat(int fd) {
  return call("fstat", [&] { return fstat_body(fd); });
}

std::uint64_t MiniOs::mmap_anon(std::size_t length) {
  return call("mmap_anon", [&] { return mmap_anon_body(length); });
}

std::vector<std::byte> MiniOs::read(int fd, std::size_t count) {
  return call("read", [&] { return read_body(fd, count); });
}

std::size_t MiniOs::write(int fd, std::span<const std::byte> data) {
  return call("write", [&] { return write_body(fd, data); });
}

void MiniOs::mkdir(std::string_view path) {
  call("mkdir", [&] { mkdir_body(path); });
}

void MiniOs::unlink(std::string_view path) {
  call("unlink", [&] { unlink_body(path); });
}

void MiniOs::mount(std::string_view path) {
  call("mount", [&] { mount_body(path); });
}

int MiniOs::open_body(std::string_view path, unsigned flags) {
  std::string norm = normalize_path(path);
  int name_index = find_name(norm);
  std::uint32_t vnode;
  if (name_index < 0) {
    if (!(flags & kOpenCreate)) {
      throw VfsError(VfsErrc::no_ent, "no such file: " + norm);
    }
    std::string parent = parent_of(norm);
    int parent_index = find_name(parent);
    if (parent_index < 0) {
      throw VfsError(VfsErrc::no_ent, "no such directory: " + parent);
    }
    NameEntry parent_entry = load_name(parent_index);
    if (parent_entry.kind != static_cast<std::uint16_t>(VnodeKind::Dir)) {
      throw VfsError(VfsErrc::not_dir, parent + " is not a directory");
    }
    int free_index = free_name_index();
    vnode = new_vnode(VnodeKind::File);
    NameEntry entry{};
    copy_path(entry.path, norm);
    entry.vnode = vnode;
    entry.kind = static_cast<std::uint16_t>(VnodeKind::File);
    entry.in_use = 1;
    store_name(free_index, entry);
  } else {
    NameEntry entry = load_name(name_index);
    if (entry.kind == static_cast<std::uint16_t>(VnodeKind::Dir) && (flags & kOpenWrite)) {
      throw VfsError(VfsErrc::not_dir, norm + " is a directory");
    }
    vnode = entry.vnode;
  }

  // Lowest free slot wins, so closed fds are reused in order.
  for (int fd = 0; fd < kHandleSlots; ++fd) {
    HandleSlot slot = load_slot(fd);
    if (!slot.in_use) {
      HandleSlot fresh{};
      fresh.in_use = 1;
      fresh.vnode = vnode;
      fresh.offset = 0;
      fresh.mode = flags & (kOpenRead | kOpenWrite);
      store_slot(fd, fresh);
      return fd;
    }
  }
  throw VfsError(VfsErrc::too_many_fds, "fd table full");
}

void MiniOs::close_body(int fd) {
  if (fd < 0 || fd >= kHandleSlots) {
    throw VfsError(VfsErrc::bad_fd, "fd out of range");
  }
  HandleSlot slot = load_slot(fd);
  if (!slot.in_use) {
    throw VfsError(VfsErrc::bad_fd, "fd not open");
  }
  if (close_hook_) close_hook_();
  store_slot(fd, HandleSlot{});
}

StatBuf MiniOs::stat_body(std::string_view path) {
  std::string norm = normalize_path(path);
  int name_index = find_name(norm);
  if (name_index < 0) {
    throw VfsError(VfsErrc::no_ent, "no such file: " + norm);
  }
  NameEntry entry = load_name(name_index);
  StatBuf buf;
  buf.vnode = entry.vnode;
  buf.kind = static_cast<VnodeKind>(entry.kind);
  buf.size = vnode_ref(entry.vnode).content.size();
  buf.links = 1;
  buf.dev = load_mount(0).in_use ? 0 : ~0u;
  return buf;
}

StatBuf MiniOs::fstat_body(int fd) {
  if (fd < 0 || fd >= kHandleSlots) {
    throw VfsError(VfsErrc::bad_fd, "fd out of range");
  }
  HandleSlot slot = load_slot(fd);
  if (!slot.in_use) {
    throw VfsError(VfsErrc::bad_fd, "fd not open");
  }
  StatBuf buf;
  buf.vnode = slot.vnode;
  const Vnode& vnode = vnode_ref(slot.vnode);
  buf.kind = vnode.kind;
  buf.size = vnode.content.size();
  buf.links = 1;
  // All vnodes live on the root mount; reading its entry is the st_dev
  // lookup.
  buf.dev = load_mount(0).in_use ? 0 : ~0u;
  return buf;
}

std::uint64_t MiniOs::mmap_anon_body(std::size_t length) {
  std::uint64_t next = dm_read<std::uint64_t>(domains(), region_table_, 0);
  std::uint64_t id = next + 1;
  dm_write(domains(), region_table_, 0, id);

  // The accounting table is a 16-entry ring: only the most recent mappings
  // stay tracked, standing in for unmap in this reduced syscall surface.
  int index = static_cast<int>((id - 1) % kRegionSlots);
  RegionRecord old = dm_read<RegionRecord>(domains(), region_table_, region_offset(index));
  if (old.id != 0) region_buffers_.erase(old.id);
  dm_write(domains(), region_table_, region_offset(index), RegionRecord{id, length});

  region_buffers_.emplace(id, std::vector<std::byte>(length));  // zero-filled
  return id;
}

std::vector<std::byte> MiniOs::read_body(int fd, std::size_t count) {
  if (fd < 0 || fd >= kHandleSlots) {
    throw VfsError(VfsErrc::bad_fd, "fd out of range");
  }
  HandleSlot slot = load_slot(fd);
  if (!slot.in_use) {
    throw VfsError(VfsErrc::bad_fd, "fd not open");
  }
  if (!(slot.mode & kOpenRead)) {
    throw VfsError(VfsErrc::bad_fd, "fd not open for reading");
  }
  (void)load_mount(0);  // mount revalidation

  const Vnode& vnode = vnode_ref(slot.vnode);
  std::size_t start = std::min<std::size_t>(slot.offset, vnode.content.size());
  std::size_t taken = std::min(count, vnode.content.size() - start);
  std::vector<std::byte> out(vnode.content.begin() + static_cast<std::ptrdiff_t>(start),
                             vnode.content.begin() + static_cast<std::ptrdiff_t>(start + taken));
  slot.offset += taken;
  store_slot(fd, slot);
  return out;
}

std::size_t MiniOs::write_body(int fd, std::span<const std::byte> data) {
  if (fd < 0 || fd >= kHandleSlots) {
    throw VfsError(VfsErrc::bad_fd, "fd out of range");
  }
  HandleSlot slot = load_slot(fd);
  if (!slot.in_use) {
    throw VfsError(VfsErrc::bad_fd, "fd not open");
  }
  if (!(slot.mode & kOpenWrite)) {
    throw VfsError(VfsErrc::bad_fd, "fd not open for writing");
  }
  (void)load_mount(0);  // mount revalidation

  Vnode& vnode = vnode_ref(slot.vnode);
  if (slot.offset + data.size() > vnode.content.size()) {
    vnode.content.resize(slot.offset + data.size());
  }
  std::copy(data.begin(), data.end(),
            vnode.content.begin() + static_cast<std::ptrdiff_t>(slot.offset));
  slot.offset += data.size();
  store_slot(fd, slot);
  return data.size();
}

void MiniOs::mkdir_body(std::string_view path) {
  std::string norm = normalize_path(path);
  if (find_name(norm) >= 0) {
    throw VfsError(VfsErrc::exists, norm + " already exists");
  }
  std::string parent = parent_of(norm);
  if (parent.empty()) {
    throw VfsError(VfsErrc::exists, "/ already exists");
  }
  int parent_index = find_name(parent);
  if (parent_index < 0) {
    throw VfsError(VfsErrc::no_ent, "no such directory: " + parent);
  }
  if (load_name(parent_index).kind != static_cast<std::uint16_t>(VnodeKind::Dir)) {
    throw VfsError(VfsErrc::not_dir, parent + " is not a directory");
  }
  int free_index = free_name_index();
  NameEntry entry{};
  copy_path(entry.path, norm);
  entry.vnode = new_vnode(VnodeKind::Dir);
  entry.kind = static_cast<std::uint16_t>(VnodeKind::Dir);
  entry.in_use = 1;
  store_name(free_index, entry);
}

void MiniOs::unlink_body(std::string_view path) {
  std::string norm = normalize_path(path);
  if (norm == "/") {
    throw VfsError(VfsErrc::exists, "cannot remove the root directory");
  }
  int name_index = find_name(norm);
  if (name_index < 0) {
    throw VfsError(VfsErrc::no_ent, "no such file: " + norm);
  }
  NameEntry entry = load_name(name_index);
  if (entry.kind == static_cast<std::uint16_t>(VnodeKind::Dir)) {
    std::string prefix = norm + "/";
    for (int i = 0; i < kNameSlots; ++i) {
      NameEntry child = load_name(i);
      if (child.in_use && std::string_view(child.path).substr(0, prefix.size()) == prefix) {
        throw VfsError(VfsErrc::exists, norm + " is not empty");
      }
    }
    for (int i = 0; i < kMountSlots; ++i) {
      MountEntry mnt = load_mount(i);
      if (mnt.in_use && norm == mnt.path) {
        throw VfsError(VfsErrc::exists, norm + " is a mount point");
      }
    }
  }
  // Open fds keep their vnode; only the name goes away.
  for (int fd = 0; fd < kHandleSlots; ++fd) {
    (void)load_slot(fd);
  }
  store_name(name_index, NameEntry{});
}

void MiniOs::mount_body(std::string_view path) {
  std::string norm = normalize_path(path);
  int name_index = find_name(norm);
  if (name_index < 0) {
    throw VfsError(VfsErrc::no_ent, "no such directory: " + norm);
  }
  NameEntry entry = load_name(name_index);
  if (entry.kind != static_cast<std::uint16_t>(VnodeKind::Dir)) {
    throw VfsError(VfsErrc::not_dir, norm + " is not a directory");
  }
  int free_index = -1;
  for (int i = 0; i < kMountSlots; ++i) {
    MountEntry mnt = load_mount(i);
    if (mnt.in_use && norm == mnt.path) {
      throw VfsError(VfsErrc::exists, norm + " is already mounted");
    }
    if (!mnt.in_use && free_index < 0) free_index = i;
  }
  if (free_index < 0) {
    throw VfsError(VfsErrc::too_many_fds, "mount table full");
  }
  MountEntry mnt{};
  copy_path(mnt.path, norm);
  mnt.root_vnode = entry.vnode;
  mnt.in_use = 1;
  store_mount(free_index, mnt);
}

// ---- adversarial demo ------------------------------------------------

#ifdef ENCLAVEDOM_ENABLE_ATTACK_DEMO

std::size_t MiniOs::Internals::slot_vnode_offset(int fd) {
  return slot_offset(fd) + offsetof(HandleSlot, vnode);
}

std::size_t MiniOs::Internals::mount_entry_offset(int index) { return mount_offset(index); }

AttackOutcome MiniOs::run_fd_table_attack(AttackVariant variant) {
  // Legal preparation: a victim file with known content and an open fd,
  // plus an attacker-owned file created through the normal syscalls.
  static constexpr std::string_view kVictimContent = "legitimate-data";
  static constexpr std::string_view kEvilContent = "pwned-by-library";

  int setup_fd = open("/attack_victim", kOpenWrite | kOpenCreate);
  write(setup_fd, std::as_bytes(std::span(kVictimContent.data(), kVictimContent.size())));
  close(setup_fd);

  int evil_fd = open("/attack_evil", kOpenWrite | kOpenCreate);
  write(evil_fd, std::as_bytes(std::span(kEvilContent.data(), kEvilContent.size())));
  close(evil_fd);
  std::uint32_t evil_vnode = stat("/attack_evil").vnode;

  int victim_fd = open("/attack_victim", kOpenRead);

  bool landed = false;
  switch (variant) {
    case AttackVariant::RawWrite: {
      // The "reverse-engineered code path": the library knows where the fd
      // table lives and writes it directly, outside any sandboxed syscall.
      // Under a hardware backend in protected mode this access faults.
      std::size_t offset = Internals::slot_vnode_offset(victim_fd);
      try {
        dm_write(domains(), handle_table_, offset, evil_vnode);
        landed = true;
      } catch (const IsolationFault&) {
        landed = false;
      }
      break;
    }
    case AttackVariant::HijackedCallback: {
      // Confused deputy: run inside a close() sandbox, which grants only
      // handle_dom, and forge a mount entry in fs_dom from there.
      int sacrificial_fd = open("/attack_victim", kOpenRead);
      MountEntry forged{};
      copy_path(forged.path, "/attack_evil_mount");
      forged.root_vnode = evil_vnode;
      forged.in_use = 1;
      close_hook_ = [&] {
        try {
          dm_write(domains(), fs_meta_, Internals::mount_entry_offset(1), forged);
          landed = true;
        } catch (const IsolationFault&) {
          landed = false;
        }
      };
      close(sacrificial_fd);
      close_hook_ = nullptr;
      break;
    }
  }

  if (!landed) {
    close(victim_fd);
    return AttackOutcome::Denied;
  }
  if (variant == AttackVariant::HijackedCallback) {
    close(victim_fd);
    return AttackOutcome::Succeeded;
  }

  // Confirm the takeover: reading the victim fd now yields attacker bytes.
  std::vector<std::byte> got = read(victim_fd, kEvilContent.size());
  close(victim_fd);
  bool took_over =
      got.size() == kEvilContent.size() &&
      std::memcmp(got.data(), kEvilContent.data(), got.size()) == 0;
  return took_over ? AttackOutcome::Succeeded : AttackOutcome::Denied;
}

#else  // !ENCLAVEDOM_ENABLE_ATTACK_DEMO

AttackOutcome MiniOs::run_fd_table_attack(AttackVariant) {
  throw Error(Errc::unknown_function, "attack demo compiled out");
}

#endif

}  // namespace enclavedom
