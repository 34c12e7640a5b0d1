// Copyright 2026 The levyfrac Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace levyfrac {

enum class ErrorCode {
  invalid_argument = 1,
  domain = 2,
  numeric = 3,
  convergence = 4,
  io = 5,
};

/// Base exception for the library. The C API maps `code()` to a status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail(ErrorCode::invalid_argument, msg);
}

inline void require_domain(bool cond, const std::string& msg) {
  if (!cond) fail(ErrorCode::domain, msg);
}

}  // namespace levyfrac
