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
// Guarded memory access: performs a copy and converts a protection fault
// (SIGSEGV/SIGBUS) into a false return instead of killing the process.
// Used by the verdict-returning access paths on hardware backends, so
// allow/deny traces can be recorded and compared against the checked
// backend. Unguarded faults keep their default fatal behavior even after
// the probe handler has been installed.

#ifndef ENCLAVEDOM_SRC_FAULT_PROBE_HPP_
#define ENCLAVEDOM_SRC_FAULT_PROBE_HPP_

#include <cstddef>

namespace enclavedom::detail {

bool guarded_read(const std::byte* src, std::byte* dst, std::size_t n) noexcept;
bool guarded_write(std::byte* dst, const std::byte* src, std::size_t n) noexcept;

}  // namespace enclavedom::detail

#endif  // ENCLAVEDOM_SRC_FAULT_PROBE_HPP_
