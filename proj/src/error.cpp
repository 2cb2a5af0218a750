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

#include "enclavedom/error.hpp"

namespace enclavedom {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::syntax_error: return "SyntaxError";
    case Errc::duplicate_rule: return "DuplicateRule";
    case Errc::duplicate_domain: return "DuplicateDomain";
    case Errc::conflicting_object_domain: return "ConflictingObjectDomain";
    case Errc::too_many_domains: return "TooManyDomains";
    case Errc::bad_label: return "BadLabel";
    case Errc::bad_size: return "BadSize";
    case Errc::version_mismatch: return "VersionMismatch";
    case Errc::already_initialized: return "AlreadyInitialized";
    case Errc::not_initialized: return "NotInitialized";
    case Errc::key_exhaustion: return "KeyExhaustion";
    case Errc::out_of_memory: return "OutOfMemory";
    case Errc::active_sandbox: return "ActiveSandbox";
    case Errc::no_such_domain: return "NoSuchDomain";
    case Errc::pool_exhausted: return "PoolExhausted";
    case Errc::unknown_handle: return "UnknownHandle";
    case Errc::double_free: return "DoubleFree";
    case Errc::bad_key: return "BadKey";
    case Errc::unknown_function: return "UnknownFunction";
    case Errc::nested_limit: return "NestedLimit";
    case Errc::frame_order_violation: return "FrameOrderViolation";
    case Errc::wrong_thread: return "WrongThread";
    case Errc::unknown_object: return "UnknownObject";
    case Errc::size_exceeded: return "SizeExceeded";
    case Errc::no_active_grant: return "NoActiveGrant";
    case Errc::not_allocated: return "NotAllocated";
    case Errc::isolation_fault: return "IsolationFault";
    case Errc::unknown_syscall: return "UnknownSyscall";
  }
  return "Error";
}

}  // namespace enclavedom
