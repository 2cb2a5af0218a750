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
// Brute-force allocation oracle: a byte-occupancy bitmap scanned at every
// 16-byte-aligned offset. Deliberately dumb and independent of the free
// list implementation it checks.

#ifndef ENCLAVEDOM_TESTS_INTERVAL_ORACLE_HPP_
#define ENCLAVEDOM_TESTS_INTERVAL_ORACLE_HPP_

#include <cstddef>
#include <optional>
#include <vector>

namespace enclavedom::testgen {

class BitmapOracle {
 public:
  explicit BitmapOracle(std::size_t capacity) : used_(capacity, 0) {}

  std::optional<std::size_t> alloc(std::size_t size) {
    if (size == 0 || size > used_.size()) return std::nullopt;
    for (std::size_t offset = 0; offset + size <= used_.size(); offset += 16) {
      bool free = true;
      for (std::size_t i = 0; i < size; ++i) {
        if (used_[offset + i]) {
          free = false;
          break;
        }
      }
      if (free) {
        for (std::size_t i = 0; i < size; ++i) used_[offset + i] = 1;
        live_ += size;
        return offset;
      }
    }
    return std::nullopt;
  }

  /// Returns false if any byte of the range was not allocated (overlap or
  /// bookkeeping mismatch).
  bool free(std::size_t offset, std::size_t size) {
    for (std::size_t i = 0; i < size; ++i) {
      if (!used_[offset + i]) return false;
    }
    for (std::size_t i = 0; i < size; ++i) used_[offset + i] = 0;
    live_ -= size;
    return true;
  }

  bool all_used(std::size_t offset, std::size_t size) const {
    for (std::size_t i = 0; i < size; ++i) {
      if (!used_[offset + i]) return false;
    }
    return true;
  }

  std::size_t live_bytes() const { return live_; }

 private:
  std::vector<unsigned char> used_;
  std::size_t live_ = 0;
};

}  // namespace enclavedom::testgen

#endif  // ENCLAVEDOM_TESTS_INTERVAL_ORACLE_HPP_
