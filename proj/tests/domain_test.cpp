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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <barrier>
#include <functional>
#include <random>
#include <thread>

#include "enclavedom/domain.hpp"
#include "enclavedom/error.hpp"
#include "enclavedom/policy.hpp"
#include "interval_oracle.hpp"

using namespace enclavedom;

namespace {

Acl two_domain_acl() {
  return parse_policy("domain handle_dom pages=4\ndomain fs_dom pages=4\n> boot >\n");
}

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& error) {
    return error.code();
  }
  FAIL("expected an Error");
  return Errc::syntax_error;
}

std::vector<std::byte> bytes_of(std::string_view text) {
  auto span = std::as_bytes(std::span(text.data(), text.size()));
  return {span.begin(), span.end()};
}

}  // namespace

TEST_CASE("init provisions one keyed pool per domain") {
  DomainManager manager(two_domain_acl(), make_backend(BackendKind::Checked));
  auto infos = manager.domains();
  REQUIRE(infos.size() == 2);
  CHECK(infos[0].capacity_bytes == 16384);
  CHECK(infos[1].capacity_bytes == 16384);
  CHECK(infos[0].key_id != infos[1].key_id);
  CHECK(infos[0].key_id >= 1);
  CHECK(infos[1].key_id <= 15);

  // Default-deny on a fresh thread: every provisioned key reports None.
  for (int key : manager.provisioned_keys()) {
    CHECK(manager.thread_access(key) == AccessMode::None);
  }
  CHECK(manager.backend().audit().keys_provisioned == 2);
  CHECK(manager.backend().audit().pages_tagged == 8);
}

TEST_CASE("init with zero domains succeeds") {
  DomainManager manager(Acl{}, make_backend(BackendKind::Checked));
  CHECK(manager.domains().empty());
}

TEST_CASE("fifteen domains fit, sixteen exhaust the key space") {
  Acl fits;
  for (int i = 0; i < 15; ++i) fits.domains.push_back(DomainDecl{"d" + std::to_string(i), 1});
  { DomainManager manager(fits, make_backend(BackendKind::Checked)); }

  Acl overflow = fits;
  overflow.domains.push_back(DomainDecl{"d15", 1});
  CHECK(code_of([&] {
          DomainManager manager(overflow, make_backend(BackendKind::Checked));
        }) == Errc::key_exhaustion);
}

TEST_CASE("a process-wide backend excludes other live managers") {
  SUBCASE("pageprot refuses to join a live manager") {
    DomainManager first(two_domain_acl(), make_backend(BackendKind::Checked));
    CHECK(code_of([] {
            DomainManager second(Acl{}, make_backend(BackendKind::PageProt));
          }) == Errc::already_initialized);
  }
  SUBCASE("nothing may join a live pageprot manager") {
    DomainManager first(two_domain_acl(), make_backend(BackendKind::PageProt));
    CHECK(code_of([] {
            DomainManager second(Acl{}, make_backend(BackendKind::Checked));
          }) == Errc::already_initialized);
  }
  SUBCASE("per-thread managers coexist") {
    DomainManager first(two_domain_acl(), make_backend(BackendKind::Checked));
    DomainManager second(parse_policy("domain other pages=1\n"),
                         make_backend(BackendKind::Checked));
    CHECK(second.domains().size() == 1);
  }
}

TEST_CASE("teardown releases everything; reuse and double teardown fail") {
  DomainManager manager(two_domain_acl(), make_backend(BackendKind::Checked));
  manager.teardown();
  CHECK(manager.backend().audit().keys_provisioned == 0);
  CHECK(manager.backend().audit().pages_tagged == 0);
  CHECK(code_of([&] { manager.teardown(); }) == Errc::not_initialized);

  // The key budget is free again for the next manager.
  DomainManager next(two_domain_acl(), make_backend(BackendKind::Checked));
}

TEST_CASE("teardown refuses while a sandbox frame is open") {
  DomainManager manager(two_domain_acl(), make_backend(BackendKind::Checked));
  manager.note_frame_opened();
  CHECK(code_of([&] { manager.teardown(); }) == Errc::active_sandbox);
  manager.note_frame_closed();
  manager.teardown();
}

TEST_CASE("startup allocation, then grant-gated allocation") {
  DomainManager manager(two_domain_acl(), make_backend(BackendKind::Checked));
  int key = manager.key_of("fs_dom");

  // Table 4 object sizes from the prototype: 1030 and 98 bytes.
  ObjectHandle big = manager.alloc("fs_dom", 1030);
  ObjectHandle small = manager.alloc("fs_dom", 98);
  CHECK(big.size == 1030);
  CHECK(manager.domain_info("fs_dom").live_bytes == 1128);
  CHECK(manager.domain_info("fs_dom").high_water == 1128);

  manager.end_startup_phase();
  CHECK(code_of([&] { manager.alloc("fs_dom", 8); }) == Errc::no_active_grant);
  manager.set_access(key, AccessMode::ReadWrite);
  ObjectHandle third = manager.alloc("fs_dom", 8);
  manager.free("fs_dom", third);
  manager.free("fs_dom", small);
  manager.free("fs_dom", big);
}

TEST_CASE("allocation errors") {
  DomainManager manager(two_domain_acl(), make_backend(BackendKind::Checked));
  CHECK(code_of([&] { manager.alloc("nowhere", 8); }) == Errc::no_such_domain);
  CHECK(code_of([&] { manager.alloc("fs_dom", 0); }) == Errc::bad_size);

  // Exactly the pool capacity fits; one more byte does not.
  ObjectHandle whole = manager.alloc("fs_dom", 4 * 4096);
  CHECK(code_of([&] { manager.alloc("fs_dom", 1); }) == Errc::pool_exhausted);
  manager.free("fs_dom", whole);
  CHECK(manager.alloc("fs_dom", 4 * 4096).size == 16384);
}

TEST_CASE("first-fit reuses the lowest offset") {
  DomainManager manager(two_domain_acl(), make_backend(BackendKind::Checked));
  ObjectHandle a = manager.alloc("fs_dom", 4096);
  ObjectHandle b = manager.alloc("fs_dom", 512);
  std::size_t offset_a = manager.allocation_offset(a);
  manager.free("fs_dom", a);
  ObjectHandle c = manager.alloc("fs_dom", 4096);
  CHECK(manager.allocation_offset(c) == offset_a);
  manager.free("fs_dom", b);
  manager.free("fs_dom", c);
}

TEST_CASE("free rejects double frees and foreign handles") {
  DomainManager manager(two_domain_acl(), make_backend(BackendKind::Checked));
  ObjectHandle a = manager.alloc("fs_dom", 64);
  manager.free("fs_dom", a);
  CHECK(code_of([&] { manager.free("fs_dom", a); }) == Errc::double_free);

  ObjectHandle b = manager.alloc("handle_dom", 64);
  CHECK(code_of([&] { manager.free("fs_dom", b); }) == Errc::unknown_handle);
  ObjectHandle fake;
  fake.key_id = static_cast<std::uint32_t>(manager.key_of("fs_dom"));
  fake.id = 999;
  fake.size = 8;
  CHECK(code_of([&] { manager.free("fs_dom", fake); }) == Errc::unknown_handle);
}

TEST_CASE("fresh allocations read as zero under a read grant") {
  DomainManager manager(two_domain_acl(), make_backend(BackendKind::Checked));
  int key = manager.key_of("fs_dom");
  ObjectHandle a = manager.alloc("fs_dom", 256);

  manager.set_access(key, AccessMode::ReadWrite);
  manager.write_bytes(a, 0, bytes_of("dirty"));
  manager.free("fs_dom", a);

  // Poison is visible in the raw pool after free (checked backend only).
  std::size_t off = 0;
  ObjectHandle b = manager.alloc("fs_dom", 256);
  off = manager.allocation_offset(b);
  CHECK(off == 0);  // first fit returns to the same offset
  std::vector<std::byte> content(256);
  manager.set_access(key, AccessMode::ReadOnly);
  manager.read_bytes(b, 0, content);
  for (std::byte byte : content) CHECK(byte == std::byte{0});
}

TEST_CASE("freed bytes are poisoned in the checked backend") {
  DomainManager manager(two_domain_acl(), make_backend(BackendKind::Checked));
  ObjectHandle a = manager.alloc("fs_dom", 32);
  std::size_t offset = manager.allocation_offset(a);
  manager.free("fs_dom", a);
  std::span<const std::byte> pool = manager.unchecked_pool_bytes("fs_dom");
  for (std::size_t i = 0; i < 32; ++i) CHECK(pool[offset + i] == std::byte{0xDD});
}

TEST_CASE("set_access semantics and key guards") {
  DomainManager manager(two_domain_acl(), make_backend(BackendKind::Checked));
  int key = manager.key_of("fs_dom");
  ObjectHandle a = manager.alloc("fs_dom", 16);
  std::vector<std::byte> buffer(4);

  manager.end_startup_phase();
  SUBCASE("read-only allows reads, denies writes") {
    manager.set_access(key, AccessMode::ReadOnly);
    CHECK(manager.try_read(a, 0, buffer) == Verdict::Allowed);
    CHECK(manager.try_write(a, 0, buffer) == Verdict::Denied);
    CHECK_THROWS_AS(manager.write_bytes(a, 0, buffer), IsolationFault);
  }
  SUBCASE("none denies reads") {
    manager.set_access(key, AccessMode::None);
    CHECK(manager.try_read(a, 0, buffer) == Verdict::Denied);
    CHECK_THROWS_AS(manager.read_bytes(a, 0, buffer), IsolationFault);
  }
  SUBCASE("key 0 and unprovisioned keys are rejected") {
    CHECK(code_of([&] { manager.set_access(0, AccessMode::None); }) == Errc::bad_key);
    CHECK(code_of([&] { manager.set_access(9, AccessMode::ReadOnly); }) == Errc::bad_key);
  }
}

TEST_CASE("access modes are thread-local in the checked backend") {
  DomainManager manager(two_domain_acl(), make_backend(BackendKind::Checked));
  int key = manager.key_of("handle_dom");
  ObjectHandle a = manager.alloc("handle_dom", 64);

  std::barrier sync(2);
  std::atomic<bool> other_denied{false};
  std::atomic<AccessMode> other_mode{AccessMode::ReadWrite};

  std::thread other([&] {
    sync.arrive_and_wait();  // wait until the main thread elevated
    other_mode.store(manager.thread_access(key));
    std::vector<std::byte> buffer(8);
    other_denied.store(manager.try_read(a, 0, buffer) == Verdict::Denied);
    sync.arrive_and_wait();
  });

  manager.set_access(key, AccessMode::ReadWrite);
  sync.arrive_and_wait();
  sync.arrive_and_wait();
  other.join();

  CHECK(other_mode.load() == AccessMode::None);
  CHECK(other_denied.load());
  CHECK(manager.thread_access(key) == AccessMode::ReadWrite);
}

TEST_CASE("out-of-bounds object access is rejected") {
  DomainManager manager(two_domain_acl(), make_backend(BackendKind::Checked));
  int key = manager.key_of("fs_dom");
  ObjectHandle a = manager.alloc("fs_dom", 16);
  manager.set_access(key, AccessMode::ReadWrite);
  std::vector<std::byte> buffer(8);
  CHECK(code_of([&] { manager.read_bytes(a, 12, buffer); }) == Errc::size_exceeded);
}

TEST_CASE("bookkeeping returns to the empty-free-list baseline") {
  DomainManager manager(parse_policy("domain aaaa_dom pages=4\ndomain bbbb_dom pages=4\n"),
                        make_backend(BackendKind::Checked));
  // Same-shaped domains cost the same before any allocation.
  std::size_t baseline = manager.bookkeeping_bytes("aaaa_dom");
  CHECK(baseline == manager.bookkeeping_bytes("bbbb_dom"));
  CHECK(baseline > 0);

  ObjectHandle a = manager.alloc("aaaa_dom", 64);
  CHECK(manager.bookkeeping_bytes("aaaa_dom") > baseline);
  manager.free("aaaa_dom", a);
  CHECK(manager.bookkeeping_bytes("aaaa_dom") == baseline);
  CHECK(manager.peak_bookkeeping_bytes("aaaa_dom") > baseline);
}

TEST_CASE("random alloc/free agrees with the bitmap oracle") {
  DomainManager manager(two_domain_acl(), make_backend(BackendKind::Checked));
  testgen::BitmapOracle oracle(16384);
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> size_dist(1, 3000);
  std::vector<std::pair<ObjectHandle, std::size_t>> live;  // handle, oracle offset

  for (int i = 0; i < 2000; ++i) {
    bool do_alloc = live.empty() || (rng() % 100 < 60);
    if (do_alloc) {
      std::size_t size = size_dist(rng);
      std::optional<std::size_t> expected = oracle.alloc(size);
      if (expected) {
        ObjectHandle handle = manager.alloc("fs_dom", size);
        CHECK(manager.allocation_offset(handle) == *expected);
        live.emplace_back(handle, *expected);
      } else {
        CHECK(code_of([&] { manager.alloc("fs_dom", size); }) == Errc::pool_exhausted);
      }
    } else {
      std::size_t pick = rng() % live.size();
      auto [handle, offset] = live[pick];
      live.erase(live.begin() + static_cast<std::ptrdiff_t>(pick));
      CHECK(oracle.free(offset, handle.size));
      manager.free("fs_dom", handle);
    }
    CHECK(manager.domain_info("fs_dom").live_bytes == oracle.live_bytes());
  }
}

TEST_CASE("pageprot backend enforces raw page protections") {
  DomainManager manager(two_domain_acl(), make_backend(BackendKind::PageProt));
  int key = manager.key_of("fs_dom");
  ObjectHandle a = manager.alloc("fs_dom", 64);
  std::vector<std::byte> buffer(16);

  manager.end_startup_phase();
  CHECK(manager.try_read(a, 0, buffer) == Verdict::Denied);
  manager.set_access(key, AccessMode::ReadOnly);
  CHECK(manager.try_read(a, 0, buffer) == Verdict::Allowed);
  CHECK(manager.try_write(a, 0, buffer) == Verdict::Denied);
  manager.set_access(key, AccessMode::ReadWrite);
  CHECK(manager.try_write(a, 0, buffer) == Verdict::Allowed);
  manager.set_access(key, AccessMode::None);
  CHECK(manager.try_read(a, 0, buffer) == Verdict::Denied);
}

TEST_CASE("pkey backend matches the model where supported") {
  if (!pkey_backend_supported()) {
    MESSAGE("protection keys unavailable; skipping");
    return;
  }
  DomainManager manager(two_domain_acl(), make_backend(BackendKind::Pkey));
  int key = manager.key_of("fs_dom");
  ObjectHandle a = manager.alloc("fs_dom", 64);
  std::vector<std::byte> buffer(16);
  manager.end_startup_phase();
  CHECK(manager.try_read(a, 0, buffer) == Verdict::Denied);
  manager.set_access(key, AccessMode::ReadOnly);
  CHECK(manager.try_read(a, 0, buffer) == Verdict::Allowed);
  CHECK(manager.try_write(a, 0, buffer) == Verdict::Denied);
}
