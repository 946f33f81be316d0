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

#pragma once

#include <cassert>
#include <string>
#include <utility>
#include <variant>

namespace mdsim {

enum class Code {
  kOk = 0,
  kInvalidConfig,
  kInvalidArgument,
  kDuplicateTable,
  kTimeout,
  kUnavailable,
  kLockNotHeld,
  kLockUpgrade,
  kNotFound,
  kAlreadyExists,
  kPermissionDenied,
  kNotEmpty,
  kNotADirectory,
  kNotAFile,
  kRootImmutable,
  kSubtreeLocked,
  kSubtreeConflict,
  kLeaseDenied,
  kRetriesExhausted,
  kUnsupported,
  kNamenodeDown,
  kTxInactive,
  kStaleHint,  // internal: hint batch mismatched the cache; repair and retry
  kInvariantViolation,
  kIoError,
};

const char* CodeName(Code code);

class Status {
 public:
  Status() : code_(Code::kOk) {}
  Status(Code code, std::string msg) : code_(code), msg_(std::move(msg)) {}

  static Status OK() { return Status(); }
  static Status InvalidConfig(std::string m) { return {Code::kInvalidConfig, std::move(m)}; }
  static Status InvalidArgument(std::string m) { return {Code::kInvalidArgument, std::move(m)}; }
  static Status DuplicateTable(std::string m) { return {Code::kDuplicateTable, std::move(m)}; }
  static Status Timeout(std::string m) { return {Code::kTimeout, std::move(m)}; }
  static Status Unavailable(std::string m) { return {Code::kUnavailable, std::move(m)}; }
  static Status LockNotHeld(std::string m) { return {Code::kLockNotHeld, std::move(m)}; }
  static Status LockUpgrade(std::string m) { return {Code::kLockUpgrade, std::move(m)}; }
  static Status NotFound(std::string m) { return {Code::kNotFound, std::move(m)}; }
  static Status AlreadyExists(std::string m) { return {Code::kAlreadyExists, std::move(m)}; }
  static Status PermissionDenied(std::string m) { return {Code::kPermissionDenied, std::move(m)}; }
  static Status NotEmpty(std::string m) { return {Code::kNotEmpty, std::move(m)}; }
  static Status NotADirectory(std::string m) { return {Code::kNotADirectory, std::move(m)}; }
  static Status NotAFile(std::string m) { return {Code::kNotAFile, std::move(m)}; }
  static Status RootImmutable(std::string m) { return {Code::kRootImmutable, std::move(m)}; }
  static Status SubtreeLocked(std::string m) { return {Code::kSubtreeLocked, std::move(m)}; }
  static Status SubtreeConflict(std::string m) { return {Code::kSubtreeConflict, std::move(m)}; }
  static Status LeaseDenied(std::string m) { return {Code::kLeaseDenied, std::move(m)}; }
  static Status RetriesExhausted(std::string m) { return {Code::kRetriesExhausted, std::move(m)}; }
  static Status Unsupported(std::string m) { return {Code::kUnsupported, std::move(m)}; }
  static Status NamenodeDown(std::string m) { return {Code::kNamenodeDown, std::move(m)}; }
  static Status TxInactive(std::string m) { return {Code::kTxInactive, std::move(m)}; }
  static Status InvariantViolation(std::string m) { return {Code::kInvariantViolation, std::move(m)}; }
  static Status IoError(std::string m) { return {Code::kIoError, std::move(m)}; }

  bool ok() const { return code_ == Code::kOk; }
  Code code() const { return code_; }
  bool Is(Code c) const { return code_ == c; }
  const std::string& message() const { return msg_; }
  std::string ToString() const;

  bool operator==(const Status& o) const { return code_ == o.code_; }

 private:
  Code code_;
  std::string msg_;
};

// Minimal value-or-status. A Result constructed from a non-OK Status carries no
// value; dereferencing it is a programming error.
template <typename T>
class Result {
 public:
  Result(T value) : v_(std::move(value)) {}             // NOLINT(runtime/explicit)
  Result(Status status) : v_(std::move(status)) {       // NOLINT(runtime/explicit)
    assert(!std::get<Status>(v_).ok());
  }

  bool ok() const { return std::holds_alternative<T>(v_); }
  Status status() const { return ok() ? Status::OK() : std::get<Status>(v_); }
  Code code() const { return status().code(); }

  T& value() { assert(ok()); return std::get<T>(v_); }
  const T& value() const { assert(ok()); return std::get<T>(v_); }
  T take() { assert(ok()); return std::move(std::get<T>(v_)); }

  T& operator*() { return value(); }
  const T& operator*() const { return value(); }
  T* operator->() { return &value(); }
  const T* operator->() const { return &value(); }

 private:
  std::variant<T, Status> v_;
};

#define MDSIM_RETURN_IF_ERROR(expr)                \
  do {                                             \
    ::mdsim::Status _st = (expr);                  \
    if (!_st.ok()) return _st;                     \
  } while (0)

}  // namespace mdsim
