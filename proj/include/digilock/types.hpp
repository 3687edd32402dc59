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

#include "digilock/crypto.hpp"

#include <compare>
#include <string>
#include <string_view>

namespace digilock::protocol {

bool is_valid_utf8(std::string_view s) noexcept;

// U_i. UTF-8, 1-64 bytes, never contains the 0x1F unit separator.
class UserId {
public:
  static constexpr std::size_t max_size = 64;
  static constexpr char separator = '\x1f';

  // Throws EncodingError.
  explicit UserId(std::string id);

  const std::string& str() const noexcept { return id_; }
  ByteView bytes() const noexcept { return as_bytes(id_); }

  friend auto operator<=>(const UserId&, const UserId&) = default;

private:
  std::string id_;
};

// m. UTF-8, 1-256 bytes. Arbitrary code points, separators included.
class SecretPhrase {
public:
  static constexpr std::size_t max_size = 256;

  // Throws EncodingError.
  explicit SecretPhrase(std::string m);

  const std::string& str() const noexcept { return m_; }
  ByteView bytes() const noexcept { return as_bytes(m_); }

  friend bool operator==(const SecretPhrase& a, const SecretPhrase& b) noexcept {
    return crypto::ct_equal(a.bytes(), b.bytes());
  }

private:
  std::string m_;
};

// Per-user tuple the locker keeps: U_i, D_u = h(U_i || K_i), E_L(m || K_i || U_i).
struct LockerRecord {
  UserId user_id;
  crypto::Digest d_u;
  crypto::Ciphertext sealed;

  friend bool operator==(const LockerRecord&, const LockerRecord&) = default;
};

// Derived values, all via the length-prefixed concatenation.
crypto::Digest user_digest(const UserId& user, const crypto::SecretKey& user_key);
crypto::Digest provider_digest(const crypto::SecretKey& provider_key);
crypto::Digest locker_key(const crypto::Digest& d_u, const crypto::Digest& h_r);
crypto::Digest session_key(const UserId& user, const crypto::SecretKey& user_key,
                           const crypto::Nonce& n_a);
crypto::Digest ack_digest(const crypto::Nonce& n_a, const crypto::Nonce& n_r);

} // namespace digilock::protocol
