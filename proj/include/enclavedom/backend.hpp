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

#ifndef ENCLAVEDOM_BACKEND_HPP_
#define ENCLAVEDOM_BACKEND_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <string_view>

#include "enclavedom/access.hpp"

namespace enclavedom {

enum class BackendKind {
  Checked,   // portable software model; enforced only on mediated accesses
  PageProt,  // OS page permissions; process-wide, faults on raw access
  Pkey,      // OS protection keys; per-thread, faults on raw access
  Auto,      // Pkey when the host supports it, Checked otherwise
};

struct BackendAudit {
  int keys_provisioned = 0;
  std::size_t pages_tagged = 0;
};

/// Enforcement mechanism behind the domain manager.
///
/// After set_thread_access(k, m), a read through a k-tagged page succeeds
/// iff m >= ReadOnly and a write succeeds iff m == ReadWrite, on the
/// calling thread. The PageProt backend cannot scope changes to a thread;
/// its access changes are process-wide, which restricts it to
/// single-threaded use.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string_view name() const noexcept = 0;
  virtual bool per_thread() const noexcept = 0;

  /// True for the Checked backend: denial verdicts come from consulting
  /// the thread's KeyRegister on mediated accesses; raw out-of-band access
  /// is not intercepted.
  virtual bool software_checked() const noexcept = 0;

  /// Returns a key in 1..15. Throws Error{key_exhaustion} when none left.
  virtual int provision_key() = 0;
  virtual void release_key(int key) = 0;

  virtual void tag_region(std::byte* base, std::size_t pages, int key) = 0;
  virtual void untag_region(std::byte* base, std::size_t pages, int key) = 0;

  virtual void set_thread_access(int key, AccessMode mode) = 0;
  virtual AccessMode thread_access(int key) const = 0;

  virtual BackendAudit audit() const = 0;
};

std::unique_ptr<Backend> make_backend(BackendKind kind);

/// Host support probe for the Pkey backend (allocates and frees one key).
bool pkey_backend_supported() noexcept;

std::optional<BackendKind> backend_from_name(std::string_view name) noexcept;
std::string_view backend_name(BackendKind kind) noexcept;

}  // namespace enclavedom

#endif  // ENCLAVEDOM_BACKEND_HPP_
