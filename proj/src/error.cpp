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

#include "digilock/error.hpp"

namespace digilock {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  case ErrorCode::AuthFailure: return "AuthFailure";
  case ErrorCode::EntropyUnavailable: return "EntropyUnavailable";
  case ErrorCode::EncodingError: return "EncodingError";
  case ErrorCode::TruncatedEncoding: return "TruncatedEncoding";
  case ErrorCode::TrailingBytes: return "TrailingBytes";
  case ErrorCode::MalformedMessage: return "MalformedMessage";
  case ErrorCode::DuplicateUser: return "DuplicateUser";
  case ErrorCode::UnknownUser: return "UnknownUser";
  case ErrorCode::OutOfOrder: return "OutOfOrder";
  case ErrorCode::AlreadyProvisioned: return "AlreadyProvisioned";
  case ErrorCode::NotProvisioned: return "NotProvisioned";
  case ErrorCode::SessionNotOpen: return "SessionNotOpen";
  case ErrorCode::UnknownDocument: return "UnknownDocument";
  case ErrorCode::DepthExceeded: return "DepthExceeded";
  case ErrorCode::IoError: return "IoError";
  case ErrorCode::CorruptStore: return "CorruptStore";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

Error::Error(ErrorCode code) : std::runtime_error(std::string(to_string(code))), code_(code) {}

} // namespace digilock
