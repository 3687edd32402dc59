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

// Wire framing: version byte 0x01, kind byte, 2-byte big-endian field
// count, then the fields in length-prefixed form. Field 0 of every kind is
// the user id the message concerns.

#include "digilock/crypto.hpp"
#include "digilock/types.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace digilock::protocol {

inline constexpr std::uint8_t wire_version = 0x01;

enum class MessageKind : std::uint8_t {
  AuthRequest = 0x01,        // [user_id, PRF_{D_u}(N_a), N_a]
  ProviderKeyRequest = 0x02, // [user_id]
  ProviderKey = 0x03,        // [user_id, R]
  Challenge = 0x04,          // [user_id, gcm nonce, body, tag] = E_{K_s}(m || N_r)
  Ack = 0x05,                // [user_id, h(N_a || N_r)]
  Result = 0x06,             // [user_id, status]
  Error = 0x7F,              // [user_id, reason]
};

std::string_view to_string(MessageKind kind) noexcept;
std::optional<MessageKind> kind_from_byte(std::uint8_t b) noexcept;

// Reason byte carried by Error messages.
enum class WireReason : std::uint8_t {
  BadUserKey = 0x01,
  BadProviderKey = 0x02,
  BlobAuthFailure = 0x03,
  BadAck = 0x04,
  Timeout = 0x05,
  UnknownUser = 0x06,
  Aborted = 0x07,
};

inline constexpr std::uint8_t result_open = 0x01;

struct Message {
  MessageKind kind{};
  std::vector<Bytes> fields;

  friend bool operator==(const Message&, const Message&) = default;
};

// Throws MalformedMessage if the field count or a field length is wrong for
// the kind.
void validate(const Message& msg);

Bytes encode_message(const Message& msg);
// Throws MalformedMessage (bad version, unknown kind, field constraints) or
// TruncatedEncoding / TrailingBytes.
Message decode_message(ByteView wire);

Message make_auth_request(const UserId& user, const crypto::Digest& proof, const crypto::Nonce& n_a);
Message make_provider_key_request(const UserId& user);
Message make_provider_key(const UserId& user, const crypto::SecretKey& provider_key);
Message make_challenge(const UserId& user, const crypto::Ciphertext& sealed);
Message make_ack(const UserId& user, const crypto::Digest& digest);
Message make_result(const UserId& user, std::uint8_t status);
Message make_error(const UserId& user, WireReason reason);

// Typed views; each validates the kind and throws MalformedMessage.
struct AuthRequestView {
  UserId user;
  crypto::Digest proof;
  crypto::Nonce n_a;
};
AuthRequestView read_auth_request(const Message& msg);
crypto::Ciphertext read_challenge(const Message& msg);
crypto::Digest read_ack(const Message& msg);
crypto::SecretKey read_provider_key(const Message& msg);
UserId read_user(const Message& msg);

// Field indexes holding secret material that traces must not reveal.
bool is_secret_field(MessageKind kind, std::size_t index) noexcept;

} // namespace digilock::protocol
