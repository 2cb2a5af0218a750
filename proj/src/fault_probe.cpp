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

#include "fault_probe.hpp"

#include <csetjmp>
#include <csignal>
#include <mutex>

namespace enclavedom::detail {

namespace {

thread_local sigjmp_buf g_probe_jmp;
thread_local volatile sig_atomic_t g_probe_active = 0;

void probe_handler(int sig) {
  if (g_probe_active) {
    g_probe_active = 0;
    siglongjmp(g_probe_jmp, 1);
  }
  // Fault outside a probe: restore the default disposition and return, so
  // the faulting instruction re-executes and the process dies with the
  // original signal.
  signal(sig, SIG_DFL);
}

void install_handler_once() {
  static std::once_flag once;
  std::call_once(once, [] {
    struct sigaction sa{};
    sa.sa_handler = probe_handler;
    sigemptyset(&sa.sa_mask);
    sa.sa_flags = SA_NODEFER;
    sigaction(SIGSEGV, &sa, nullptr);
    sigaction(SIGBUS, &sa, nullptr);
  });
}

// Byte-at-a-time so a fault leaves no torn multi-byte state and the
// compiler cannot hoist the access out of the guarded region.
void copy_volatile(volatile std::byte* dst, const volatile std::byte* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = src[i];
}

}  // namespace

bool guarded_read(const std::byte* src, std::byte* dst, std::size_t n) noexcept {
  install_handler_once();
  if (sigsetjmp(g_probe_jmp, 1) != 0) {
    return false;
  }
  g_probe_active = 1;
  copy_volatile(dst, src, n);
  g_probe_active = 0;
  return true;
}

bool guarded_write(std::byte* dst, const std::byte* src, std::size_t n) noexcept {
  install_handler_once();
  if (sigsetjmp(g_probe_jmp, 1) != 0) {
    return false;
  }
  g_probe_active = 1;
  copy_volatile(dst, src, n);
  g_probe_active = 0;
  return true;
}

}  // namespace enclavedom::detail
