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

#include "digilock/messages.hpp"

#include "digilock/encoding.hpp"

#include <array>

namespace digilock::protocol {

namespace {

struct FieldRule {
  std::size_t min;
  std::size_t max;
};

constexpr FieldRule user_rule{1, UserId::max_size};
constexpr std::size_t max_challenge_body = 1u << 16;

struct KindRules {
  std::size_t count;
  std::array<FieldRule, 4> fields;
};

KindRules rules_for(MessageKind kind) noexcept {
  switch (kind) {
  case MessageKind::AuthRequest:
    return {3, {user_rule, {32, 32}, {16, 16}, {}}};
  case MessageKind::ProviderKeyRequest:
    return {1, {user_rule, {}, {}, {}}};
  case MessageKind::ProviderKey:
    return {2, {user_rule, {crypto::SecretKey::min_size, crypto::SecretKey::max_size}, {}, {}}};
  case MessageKind::Challenge:
    return {4,
            {user_rule,
             {crypto::Ciphertext::nonce_size, crypto::Ciphertext::nonce_size},
             {0, max_challenge_body},
             {crypto::Ciphertext::tag_size, crypto::Ciphertext::tag_size}}};
  case MessageKind::Ack:
    return {2, {user_rule, {32, 32}, {}, {}}};
  case MessageKind::Result:
  case MessageKind::Error:
    return {2, {user_rule, {1, 1}, {}, {}}};
  }
  return {0, {}};
}

[[noreturn]] void malformed(const std::string& why) { throw Error(ErrorCode::MalformedMessage, why); }

void expect_kind(const Message& msg, MessageKind kind) {
  if (msg.kind != kind)
    malformed("expected " + std::string(to_string(kind)) + ", got " + std::string(to_string(msg.kind)));
  validate(msg);
}

UserId user_field(const Message& msg) {
  const auto& f = msg.fields.at(0);
  try {
    return UserId(std::string(f.begin(), f.end()));
  } catch (const Error& e) {
    malformed(std::string("bad user id field: ") + e.what());
  }
}

} // namespace

std::string_view to_string(MessageKind kind) noexcept {
  switch (kind) {
  case MessageKind::AuthRequest: return "AuthRequest";
  case MessageKind::ProviderKeyRequest: return "ProviderKeyRequest";
  case MessageKind::ProviderKey: return "ProviderKey";
  case MessageKind::Challenge: return "Challenge";
  case MessageKind::Ack: return "Ack";
  case MessageKind::Result: return "Result";
  case MessageKind::Error: return "Error";
  }
  return "Unknown";
}

std::optional<MessageKind> kind_from_byte(std::uint8_t b) noexcept {
  switch (b) {
  case 0x01: case 0x02: case 0x03: case 0x04: case 0x05: case 0x06: case 0x7f:
    return static_cast<MessageKind>(b);
  default:
    return std::nullopt;
  }
}

void validate(const Message& msg) {
  if (!kind_from_byte(static_cast<std::uint8_t>(msg.kind)))
    malformed("unknown message kind");
  auto rules = rules_for(msg.kind);
  if (msg.fields.size() != rules.count)
    malformed(std::string(to_string(msg.kind)) + " expects " + std::to_string(rules.count) +
              " fields, got " + std::to_string(msg.fields.size()));
  for (std::size_t i = 0; i < rules.count; ++i) {
    auto n = msg.fields[i].size();
    if (n < rules.fields[i].min || n > rules.fields[i].max)
      malformed(std::string(to_string(msg.kind)) + " field " + std::to_string(i) +
                " has invalid length " + std::to_string(n));
  }
}

Bytes encode_message(const Message& msg) {
  validate(msg);
  Bytes out{wire_version, static_cast<std::uint8_t>(msg.kind),
            static_cast<std::uint8_t>(msg.fields.size() >> 8),
            static_cast<std::uint8_t>(msg.fields.size())};
  auto body = encode_fields(msg.fields);
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

Message decode_message(ByteView wire) {
  if (wire.size() < 4)
    throw Error(ErrorCode::TruncatedEncoding, "message header truncated");
  if (wire[0] != wire_version)
    malformed("unsupported wire version " + std::to_string(wire[0]));
  auto kind = kind_from_byte(wire[1]);
  if (!kind)
    malformed("unknown message kind " + std::to_string(wire[1]));
  std::size_t count = (std::size_t{wire[2]} << 8) | wire[3];
  Message msg{*kind, decode_fields(wire.subspan(4))};
  if (msg.fields.size() != count)
    malformed("field count header says " + std::to_string(count) + ", body has " +
              std::to_string(msg.fields.size()));
  validate(msg);
  return msg;
}

Message make_auth_request(const UserId& user, const crypto::Digest& proof, const crypto::Nonce& n_a) {
  return {MessageKind::AuthRequest, {to_bytes(user.str()), proof.to_vector(), n_a.to_vector()}};
}

Message make_provider_key_request(const UserId& user) {
  return {MessageKind::ProviderKeyRequest, {to_bytes(user.str())}};
}

Message make_provider_key(const UserId& user, const crypto::SecretKey& provider_key) {
  auto r = provider_key.reveal();
  return {MessageKind::ProviderKey, {to_bytes(user.str()), Bytes(r.begin(), r.end())}};
}

Message make_challenge(const UserId& user, const crypto::Ciphertext& sealed) {
  return {MessageKind::Challenge,
          {to_bytes(user.str()), Bytes(sealed.nonce.begin(), sealed.nonce.end()), sealed.body,
           Bytes(sealed.tag.begin(), sealed.tag.end())}};
}

Message make_ack(const UserId& user, const crypto::Digest& digest) {
  return {MessageKind::Ack, {to_bytes(user.str()), digest.to_vector()}};
}

Message make_result(const UserId& user, std::uint8_t status) {
  return {MessageKind::Result, {to_bytes(user.str()), Bytes{status}}};
}

Message make_error(const UserId& user, WireReason reason) {
  return {MessageKind::Error, {to_bytes(user.str()), Bytes{static_cast<std::uint8_t>(reason)}}};
}

AuthRequestView read_auth_request(const Message& msg) {
  expect_kind(msg, MessageKind::AuthRequest);
  return {user_field(msg), crypto::Digest::from(msg.fields[1]), crypto::Nonce::from(msg.fields[2])};
}

crypto::Ciphertext read_challenge(const Message& msg) {
  expect_kind(msg, MessageKind::Challenge);
  crypto::Ciphertext ct;
  std::copy(msg.fields[1].begin(), msg.fields[1].end(), ct.nonce.begin());
  ct.body = msg.fields[2];
  std::copy(msg.fields[3].begin(), msg.fields[3].end(), ct.tag.begin());
  return ct;
}

crypto::Digest read_ack(const Message& msg) {
  expect_kind(msg, MessageKind::Ack);
  return crypto::Digest::from(msg.fields[1]);
}

crypto::SecretKey read_provider_key(const Message& msg) {
  expect_kind(msg, MessageKind::ProviderKey);
  return crypto::SecretKey(msg.fields[1]);
}

UserId read_user(const Message& msg) {
  validate(msg);
  return user_field(msg);
}

bool is_secret_field(MessageKind kind, std::size_t index) noexcept {
  return kind == MessageKind::ProviderKey && index == 1;
}

} // namespace digilock::protocol
