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

#include "enclavedom/backend.hpp"

#include <sys/mman.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <mutex>
#include <thread>
#include <unordered_map>

#if defined(__linux__)
#include <sys/syscall.h>
#endif

#include "enclavedom/error.hpp"

namespace enclavedom {

namespace {

int prot_for(AccessMode mode) {
  switch (mode) {
    case AccessMode::None: return PROT_NONE;
    case AccessMode::ReadOnly: return PROT_READ;
    case AccessMode::ReadWrite: return PROT_READ | PROT_WRITE;
  }
  return PROT_NONE;
}

// Key bookkeeping shared by the software backends: keys 1..15, first-free
// provisioning.
class KeyPool {
 public:
  int provision() {
    for (int k = 1; k < kKeyCount; ++k) {
      if (!used_[k]) {
        used_[k] = true;
        ++count_;
        return k;
      }
    }
    throw Error(Errc::key_exhaustion, "no protection keys left (15 usable)");
  }

  void release(int key) {
    if (key >= 1 && key < kKeyCount && used_[key]) {
      used_[key] = false;
      --count_;
    }
  }

  bool provisioned(int key) const { return key >= 0 && key < kKeyCount && used_[key]; }
  int count() const { return count_; }

 private:
  std::array<bool, kKeyCount> used_{};
  int count_ = 0;
};

/// Pure-software model. Enforcement happens on mediated accesses, which
/// consult the calling thread's KeyRegister; raw out-of-band access is not
/// intercepted (documented limitation). Used for property tests and CI.
class CheckedBackend final : public Backend {
 public:
  std::string_view name() const noexcept override { return "checked"; }
  bool per_thread() const noexcept override { return true; }
  bool software_checked() const noexcept override { return true; }

  int provision_key() override {
    std::lock_guard lock(mutex_);
    return keys_.provision();
  }

  void release_key(int key) override {
    std::lock_guard lock(mutex_);
    keys_.release(key);
  }

  void tag_region(std::byte*, std::size_t pages, int) override {
    std::lock_guard lock(mutex_);
    pages_tagged_ += pages;
  }

  void untag_region(std::byte*, std::size_t pages, int) override {
    std::lock_guard lock(mutex_);
    pages_tagged_ -= pages;
  }

  void set_thread_access(int key, AccessMode mode) override {
    std::lock_guard lock(mutex_);
    registers_[std::this_thread::get_id()].set(key, mode);
  }

  AccessMode thread_access(int key) const override {
    if (key == kDefaultKey) return AccessMode::ReadWrite;
    std::lock_guard lock(mutex_);
    auto it = registers_.find(std::this_thread::get_id());
    if (it == registers_.end()) return KeyRegister::fresh().mode(key);
    return it->second.mode(key);
  }

  BackendAudit audit() const override {
    std::lock_guard lock(mutex_);
    return {keys_.count(), pages_tagged_};
  }

 private:
  mutable std::mutex mutex_;
  KeyPool keys_;
  std::size_t pages_tagged_ = 0;
  // Fresh register per thread: key 0 ReadWrite, keys 1..15 None.
  std::unordered_map<std::thread::id, KeyRegister> registers_;
};

/// Maps access modes to OS page permissions at grant/revoke time. Enforces
/// raw access, but protection changes are process-wide, not per-thread, so
/// this backend is restricted to single-threaded runs.
class PageProtBackend final : public Backend {
 public:
  std::string_view name() const noexcept override { return "pageprot"; }
  bool per_thread() const noexcept override { return false; }
  bool software_checked() const noexcept override { return false; }

  int provision_key() override { return keys_.provision(); }
  void release_key(int key) override { keys_.release(key); }

  void tag_region(std::byte* base, std::size_t pages, int key) override {
    regions_[key] = {base, pages};
    modes_[key] = AccessMode::None;
    if (mprotect(base, pages * kPageSize, PROT_NONE) != 0) {
      throw Error(Errc::out_of_memory, std::string("mprotect: ") + std::strerror(errno));
    }
    pages_tagged_ += pages;
  }

  void untag_region(std::byte* base, std::size_t pages, int key) override {
    mprotect(base, pages * kPageSize, PROT_READ | PROT_WRITE);
    regions_[key] = {};
    pages_tagged_ -= pages;
  }

  void set_thread_access(int key, AccessMode mode) override {
    const Region& region = regions_[key];
    if (region.base != nullptr &&
        mprotect(region.base, region.pages * kPageSize, prot_for(mode)) != 0) {
      throw Error(Errc::bad_key, std::string("mprotect: ") + std::strerror(errno));
    }
    modes_[key] = mode;
  }

  AccessMode thread_access(int key) const override {
    if (key == kDefaultKey) return AccessMode::ReadWrite;
    return modes_[key];
  }

  BackendAudit audit() const override { return {keys_.count(), pages_tagged_}; }

 private:
  struct Region {
    std::byte* base = nullptr;
    std::size_t pages = 0;
  };

  KeyPool keys_;
  std::array<Region, kKeyCount> regions_{};
  std::array<AccessMode, kKeyCount> modes_{};
  std::size_t pages_tagged_ = 0;
};

#if defined(__linux__) && defined(__x86_64__) && defined(SYS_pkey_alloc)
#define ENCLAVEDOM_HAVE_PKEY 1

constexpr unsigned kPkeyDisableAccess = 0x1;
constexpr unsigned kPkeyDisableWrite = 0x2;

long sys_pkey_alloc(unsigned flags, unsigned access_rights) {
  return syscall(SYS_pkey_alloc, flags, access_rights);
}

long sys_pkey_free(int pkey) { return syscall(SYS_pkey_free, pkey); }

long sys_pkey_mprotect(void* addr, std::size_t len, int prot, int pkey) {
  return syscall(SYS_pkey_mprotect, addr, len, prot, pkey);
}

std::uint32_t rdpkru() {
  std::uint32_t eax;
  asm volatile(".byte 0x0f,0x01,0xee" : "=a"(eax) : "c"(0), "d"(0));
  return eax;
}

void wrpkru(std::uint32_t pkru) {
  asm volatile(".byte 0x0f,0x01,0xef" : : "a"(pkru), "c"(0), "d"(0));
}

unsigned rights_for(AccessMode mode) {
  switch (mode) {
    case AccessMode::None: return kPkeyDisableAccess | kPkeyDisableWrite;
    case AccessMode::ReadOnly: return kPkeyDisableWrite;
    case AccessMode::ReadWrite: return 0;
  }
  return kPkeyDisableAccess | kPkeyDisableWrite;
}

/// Real OS protection keys: per-thread enforcement of raw accesses via the
/// userspace key-rights register.
class PkeyBackend final : public Backend {
 public:
  std::string_view name() const noexcept override { return "pkey"; }
  bool per_thread() const noexcept override { return true; }
  bool software_checked() const noexcept override { return false; }

  int provision_key() override {
    long key = sys_pkey_alloc(0, kPkeyDisableAccess | kPkeyDisableWrite);
    if (key < 0) {
      throw Error(Errc::key_exhaustion,
                  std::string("pkey_alloc: ") + std::strerror(errno));
    }
    std::lock_guard lock(mutex_);
    ++keys_;
    return static_cast<int>(key);
  }

  void release_key(int key) override {
    sys_pkey_free(key);
    std::lock_guard lock(mutex_);
    --keys_;
  }

  void tag_region(std::byte* base, std::size_t pages, int key) override {
    if (sys_pkey_mprotect(base, pages * kPageSize, PROT_READ | PROT_WRITE, key) != 0) {
      throw Error(Errc::out_of_memory,
                  std::string("pkey_mprotect: ") + std::strerror(errno));
    }
    std::lock_guard lock(mutex_);
    pages_tagged_ += pages;
  }

  void untag_region(std::byte* base, std::size_t pages, int) override {
    sys_pkey_mprotect(base, pages * kPageSize, PROT_READ | PROT_WRITE, 0);
    std::lock_guard lock(mutex_);
    pages_tagged_ -= pages;
  }

  void set_thread_access(int key, AccessMode mode) override {
    std::uint32_t pkru = rdpkru();
    std::uint32_t shift = static_cast<std::uint32_t>(key) * 2;
    pkru = (pkru & ~(3u << shift)) | (rights_for(mode) << shift);
    wrpkru(pkru);
  }

  AccessMode thread_access(int key) const override {
    if (key == kDefaultKey) return AccessMode::ReadWrite;
    std::uint32_t bits = (rdpkru() >> (static_cast<std::uint32_t>(key) * 2)) & 3u;
    if (bits & kPkeyDisableAccess) return AccessMode::None;
    if (bits & kPkeyDisableWrite) return AccessMode::ReadOnly;
    return AccessMode::ReadWrite;
  }

  BackendAudit audit() const override {
    std::lock_guard lock(mutex_);
    return {keys_, pages_tagged_};
  }

 private:
  mutable std::mutex mutex_;
  int keys_ = 0;
  std::size_t pages_tagged_ = 0;
};

#endif  // pkey support compiled in

}  // namespace

bool pkey_backend_supported() noexcept {
#ifdef ENCLAVEDOM_HAVE_PKEY
  static const bool supported = [] {
    long key = sys_pkey_alloc(0, 0);
    if (key < 0) return false;
    sys_pkey_free(static_cast<int>(key));
    return true;
  }();
  return supported;
#else
  return false;
#endif
}

std::unique_ptr<Backend> make_backend(BackendKind kind) {
  switch (kind) {
    case BackendKind::Checked:
      return std::make_unique<CheckedBackend>();
    case BackendKind::PageProt:
      return std::make_unique<PageProtBackend>();
    case BackendKind::Pkey:
#ifdef ENCLAVEDOM_HAVE_PKEY
      if (pkey_backend_supported()) return std::make_unique<PkeyBackend>();
#endif
      throw Error(Errc::key_exhaustion, "protection keys not supported on this host");
    case BackendKind::Auto:
#ifdef ENCLAVEDOM_HAVE_PKEY
      if (pkey_backend_supported()) return std::make_unique<PkeyBackend>();
#endif
      return std::make_unique<CheckedBackend>();
  }
  return std::make_unique<CheckedBackend>();
}

std::optional<BackendKind> backend_from_name(std::string_view name) noexcept {
  if (name == "checked") return BackendKind::Checked;
  if (name == "pageprot") return BackendKind::PageProt;
  if (name == "pkey") return BackendKind::Pkey;
  if (name == "auto") return BackendKind::Auto;
  return std::nullopt;
}

std::string_view backend_name(BackendKind kind) noexcept {
  switch (kind) {
    case BackendKind::Checked: return "checked";
    case BackendKind::PageProt: return "pageprot";
    case BackendKind::Pkey: return "pkey";
    case BackendKind::Auto: return "auto";
  }
  return "checked";
}

}  // namespace enclavedom
