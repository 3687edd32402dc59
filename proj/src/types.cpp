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

#include "digilock/types.hpp"

#include "digilock/encoding.hpp"

namespace digilock::protocol {

bool is_valid_utf8(std::string_view s) noexcept {
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xe0) == 0xc0) {
      extra = 1;
      cp = c & 0x1f;
    } else if ((c & 0xf0) == 0xe0) {
      extra = 2;
      cp = c & 0x0f;
    } else if ((c & 0xf8) == 0xf0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (s.size() - i <= extra)
      return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xc0) != 0x80)
        return false;
      cp = (cp << 6) | (cc & 0x3f);
    }
    // Overlong forms, surrogates, out of range.
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) || (extra == 3 && cp < 0x10000) ||
        (cp >= 0xd800 && cp <= 0xdfff) || cp > 0x10ffff)
      return false;
    i += extra + 1;
  }
  return true;
}

UserId::UserId(std::string id) : id_(std::move(id)) {
  if (id_.empty() || id_.size() > max_size)
    throw Error(ErrorCode::EncodingError, "user id must be 1-64 bytes");
  if (id_.find(separator) != std::string::npos)
    throw Error(ErrorCode::EncodingError, "user id contains the 0x1F separator");
  if (!is_valid_utf8(id_))
    throw Error(ErrorCode::EncodingError, "user id is not valid UTF-8");
}

SecretPhrase::SecretPhrase(std::string m) : m_(std::move(m)) {
  if (m_.empty() || m_.size() > max_size)
    throw Error(ErrorCode::EncodingError, "secret phrase must be 1-256 bytes");
  if (!is_valid_utf8(m_))
    throw Error(ErrorCode::EncodingError, "secret phrase is not valid UTF-8");
}

crypto::Digest user_digest(const UserId& user, const crypto::SecretKey& user_key) {
  return concat_hash({user.bytes(), user_key.reveal()});
}

crypto::Digest provider_digest(const crypto::SecretKey& provider_key) {
  return crypto::hash(provider_key.reveal());
}

crypto::Digest locker_key(const crypto::Digest& d_u, const crypto::Digest& h_r) {
  return crypto::xor_digests(d_u, h_r);
}

crypto::Digest session_key(const UserId& user, const crypto::SecretKey& user_key,
                           const crypto::Nonce& n_a) {
  return concat_hash({user.bytes(), user_key.reveal(), n_a.view()});
}

crypto::Digest ack_digest(const crypto::Nonce& n_a, const crypto::Nonce& n_r) {
  return concat_hash({n_a.view(), n_r.view()});
}

} // namespace digilock::protocol
