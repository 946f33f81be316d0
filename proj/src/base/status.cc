// Copyright (c) 2026 The mdsim Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "base/status.h"

namespace mdsim {

const char* CodeName(Code code) {
  switch (code) {
    case Code::kOk: return "OK";
    case Code::kInvalidConfig: return "InvalidConfig";
    case Code::kInvalidArgument: return "InvalidArgument";
    case Code::kDuplicateTable: return "DuplicateTable";
    case Code::kTimeout: return "Timeout";
    case Code::kUnavailable: return "Unavailable";
    case Code::kLockNotHeld: return "LockNotHeld";
    case Code::kLockUpgrade: return "LockUpgrade";
    case Code::kNotFound: return "NotFound";
    case Code::kAlreadyExists: return "AlreadyExists";
    case Code::kPermissionDenied: return "PermissionDenied";
    case Code::kNotEmpty: return "NotEmpty";
    case Code::kNotADirectory: return "NotADirectory";
    case Code::kNotAFile: return "NotAFile";
    case Code::kRootImmutable: return "RootImmutable";
    case Code::kSubtreeLocked: return "SubtreeLocked";
    case Code::kSubtreeConflict: return "SubtreeConflict";
    case Code::kLeaseDenied: return "LeaseDenied";
    case Code::kRetriesExhausted: return "RetriesExhausted";
    case Code::kUnsupported: return "Unsupported";
    case Code::kNamenodeDown: return "NamenodeDown";
    case Code::kTxInactive: return "TxInactive";
    case Code::kStaleHint: return "StaleHint";
    case Code::kInvariantViolation: return "InvariantViolation";
    case Code::kIoError: return "IoError";
  }
  return "Unknown";
}

std::string Status::ToString() const {
  if (ok()) return "OK";
  std::string s = CodeName(code_);
  if (!msg_.empty()) {
    s += ": ";
    s += msg_;
  }
  return s;
}

}  // namespace mdsim
