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

#include "digilock/encoding.hpp"

namespace digilock::protocol {

namespace {

void append_field(Bytes& out, ByteView field) {
  if (field.size() > 0xffffffffu)
    throw Error(ErrorCode::EncodingError, "field exceeds 4 GiB");
  auto n = static_cast<std::uint32_t>(field.size());
  out.push_back(static_cast<std::uint8_t>(n >> 24));
  out.push_back(static_cast<std::uint8_t>(n >> 16));
  out.push_back(static_cast<std::uint8_t>(n >> 8));
  out.push_back(static_cast<std::uint8_t>(n));
  out.insert(out.end(), field.begin(), field.end());
}

} // namespace

Bytes encode_fields(std::span<const Bytes> fields) {
  Bytes out;
  for (const auto& f : fields)
    append_field(out, f);
  return out;
}

Bytes encode_fields(std::initializer_list<ByteView> fields) {
  Bytes out;
  for (auto f : fields)
    append_field(out, f);
  return out;
}

std::vector<Bytes> decode_fields(ByteView encoded) {
  std::vector<Bytes> fields;
  std::size_t pos = 0;
  while (pos < encoded.size()) {
    if (encoded.size() - pos < 4)
      throw Error(ErrorCode::TrailingBytes, "incomplete length prefix at offset " + std::to_string(pos));
    std::uint32_t n = (std::uint32_t{encoded[pos]} << 24) | (std::uint32_t{encoded[pos + 1]} << 16) |
                      (std::uint32_t{encoded[pos + 2]} << 8) | std::uint32_t{encoded[pos + 3]};
    pos += 4;
    if (encoded.size() - pos < n)
      throw Error(ErrorCode::TruncatedEncoding, "field of length " + std::to_string(n) + " truncated");
    fields.emplace_back(encoded.begin() + static_cast<std::ptrdiff_t>(pos),
                        encoded.begin() + static_cast<std::ptrdiff_t>(pos + n));
    pos += n;
  }
  return fields;
}

crypto::Digest concat_hash(std::initializer_list<ByteView> fields) {
  return crypto::hash(encode_fields(fields));
}

} // namespace digilock::protocol
