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
// Microbenchmark harness: stress-loops mini-libOS syscalls and measures
// what fraction of each call is spent in monitor operations (grant,
// revoke, size checks), plus the memory the monitor's bookkeeping costs.
// Reference numbers from the original Graphene-SGX deployment of this
// design are attached as metadata for side-by-side reading; they are not
// pass/fail thresholds, since the syscall bodies here are not Graphene's.

#ifndef ENCLAVEDOM_BENCH_HPP_
#define ENCLAVEDOM_BENCH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "enclavedom/backend.hpp"
#include "enclavedom/minios.hpp"

namespace enclavedom::bench {

struct SyscallRow {
  std::string name;
  std::uint64_t iterations = 0;  // total across runs
  std::uint64_t total_ns = 0;
  std::uint64_t monitor_ns = 0;
  double fraction = 0.0;         // monitor_ns / total_ns
  double median_fraction = 0.0;  // median of per-run fractions
  double mean_call_ns = 0.0;
  std::optional<double> reference_fraction;  // Graphene-SGX prototype figure
};

struct DomainRow {
  std::string label;
  std::uint64_t bookkeeping_peak_bytes = 0;
  std::uint64_t pool_high_water_bytes = 0;
  std::optional<std::uint64_t> reference_bytes;  // Graphene-SGX prototype figure
};

struct MemoryReport {
  std::vector<DomainRow> domains;
  std::uint64_t grant_table_bytes = 0;
  std::uint64_t frame_stack_bytes = 0;
  std::uint64_t object_registry_bytes = 0;
  std::uint64_t total_bytes = 0;  // domain rows + the global fields above
  std::optional<std::uint64_t> reference_total_bytes;
};

struct BenchReport {
  std::string backend;
  std::string timestamp;
  std::uint64_t iterations_per_run = 0;
  int runs = 0;
  std::vector<SyscallRow> syscalls;
  MemoryReport memory;
  std::uint64_t total_ns = 0;
  std::uint64_t total_monitor_ns = 0;
};

inline constexpr int kBenchRuns = 5;

std::vector<std::string> default_bench_syscalls();

/// Run `iterations` timed calls per syscall per run (5 runs, median
/// reported). Throws Error{unknown_syscall} for names outside the
/// mini-libOS surface.
BenchReport run_syscall_bench(MiniOs& os, const std::vector<std::string>& syscalls,
                              std::uint64_t iterations);

/// Snapshot monitor/allocator bookkeeping sizes from a live instance.
MemoryReport measure_memory_overhead(const Monitor& monitor);

std::string to_json(const BenchReport& report);
std::string format_table(const BenchReport& report);

}  // namespace enclavedom::bench

#endif  // ENCLAVEDOM_BENCH_HPP_
