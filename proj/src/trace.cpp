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

#include "digilock/trace.hpp"

#include "digilock/encoding.hpp"

#include <nlohmann/json.hpp>

namespace digilock::sim {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
  case Verdict::Delivered: return "delivered";
  case Verdict::Dropped: return "dropped";
  case Verdict::Modified: return "modified";
  case Verdict::Replayed: return "replayed";
  }
  return "unknown";
}

crypto::Digest payload_digest(const protocol::Message& msg) {
  static constexpr std::string_view redacted = "<redacted>";
  std::vector<Bytes> fields = msg.fields;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (protocol::is_secret_field(msg.kind, i))
      fields[i] = to_bytes(redacted);
  }
  Bytes framed{protocol::wire_version, static_cast<std::uint8_t>(msg.kind)};
  auto body = protocol::encode_fields(fields);
  framed.insert(framed.end(), body.begin(), body.end());
  return crypto::hash(framed);
}

std::vector<MessageKind> Trace::delivered_kinds() const {
  std::vector<MessageKind> kinds;
  for (const auto& s : steps_) {
    if (s.verdict != Verdict::Dropped)
      kinds.push_back(s.kind);
  }
  return kinds;
}

std::string Trace::to_jsonl() const {
  std::string out;
  std::size_t index = 0;
  for (const auto& s : steps_) {
    nlohmann::ordered_json line;
    line["step"] = index++;
    line["t_ms"] = s.t_ms;
    line["from"] = protocol::to_string(s.from);
    line["to"] = protocol::to_string(s.to);
    line["via"] = s.via_provider ? nlohmann::ordered_json("provider") : nlohmann::ordered_json(nullptr);
    line["kind"] = protocol::to_string(s.kind);
    line["payload"] = crypto::to_hex(s.payload.view());
    line["verdict"] = to_string(s.verdict);
    out += line.dump();
    out += '\n';
  }
  return out;
}

} // namespace digilock::sim
