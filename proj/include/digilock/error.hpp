// Copyright 2026 The DigiLock Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace digilock {

enum class ErrorCode {
  InvalidArgument,
  AuthFailure,
  EntropyUnavailable,
  EncodingError,
  TruncatedEncoding,
  TrailingBytes,
  MalformedMessage,
  DuplicateUser,
  UnknownUser,
  OutOfOrder,
  AlreadyProvisioned,
  NotProvisioned,
  SessionNotOpen,
  UnknownDocument,
  DepthExceeded,
  IoError,
  CorruptStore,
};

std::string_view to_string(ErrorCode code) noexcept;

// The single exception type thrown by the core. The C API maps `code()`
// onto its status enum.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what);
  explicit Error(ErrorCode code);

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace digilock
