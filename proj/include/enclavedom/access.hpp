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

#ifndef ENCLAVEDOM_ACCESS_HPP_
#define ENCLAVEDOM_ACCESS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>

namespace enclavedom {

inline constexpr int kKeyCount = 16;
inline constexpr int kDefaultKey = 0;   // untagged memory, always read-write
inline constexpr int kMaxDomains = 15;  // keys 1..15 usable for domains
inline constexpr std::size_t kPageSize = 4096;

/// Ordered by permissiveness: None < ReadOnly < ReadWrite.
enum class AccessMode : std::uint8_t {
  None = 0,
  ReadOnly = 1,
  ReadWrite = 2,
};

constexpr bool allows_read(AccessMode m) noexcept { return m >= AccessMode::ReadOnly; }
constexpr bool allows_write(AccessMode m) noexcept { return m == AccessMode::ReadWrite; }

enum class Verdict : std::uint8_t {
  Allowed,
  Denied,
};

/// Per-thread bitmap of access modes for the 16 protection keys.
/// Key 0 covers untagged memory and is pinned to ReadWrite; a fresh
/// register denies keys 1..15.
struct KeyRegister {
  std::array<AccessMode, kKeyCount> modes{};

  static KeyRegister fresh() noexcept {
    KeyRegister r;
    r.modes[kDefaultKey] = AccessMode::ReadWrite;
    return r;
  }

  AccessMode mode(int key) const noexcept { return modes[static_cast<std::size_t>(key)]; }

  void set(int key, AccessMode m) noexcept {
    if (key == kDefaultKey) return;  // immutable
    modes[static_cast<std::size_t>(key)] = m;
  }
};

}  // namespace enclavedom

#endif  // ENCLAVEDOM_ACCESS_HPP_
