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

#include "digilock/actors.hpp"
#include "digilock/messages.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace digilock::sim {

using protocol::Endpoint;
using protocol::MessageKind;

enum class Verdict { Delivered, Dropped, Modified, Replayed };
std::string_view to_string(Verdict v) noexcept;

struct TraceStep {
  std::int64_t t_ms = 0;
  Endpoint from{};
  Endpoint to{};
  bool via_provider = false;
  MessageKind kind{};
  // SHA-256 over the message with secret fields replaced; see payload_digest.
  crypto::Digest payload;
  Verdict verdict{};

  friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

// Digest of the framed message after replacing secret fields (R) with a
// fixed marker, so trace consumers can correlate messages without learning
// key bytes.
crypto::Digest payload_digest(const protocol::Message& msg);

class Trace {
public:
  void record(TraceStep step) { steps_.push_back(step); }
  const std::vector<TraceStep>& steps() const noexcept { return steps_; }

  // Kinds of the messages that reached their receiver (delivered, modified
  // or replayed), in order.
  std::vector<MessageKind> delivered_kinds() const;

  // One JSON object per line:
  // {"step","t_ms","from","to","via","kind","payload","verdict"}
  std::string to_jsonl() const;

private:
  std::vector<TraceStep> steps_;
};

} // namespace digilock::sim
