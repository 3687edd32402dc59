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

#include "digilock/protocol.hpp"

#include "digilock/encoding.hpp"

namespace digilock::protocol {

namespace {

LockerSession fail(LockerSession s, FailureReason why) {
  s.state = LockerState::Failed;
  s.reason = why;
  return s;
}

UserSession fail(UserSession s, FailureReason why) {
  s.state = UserState::Failed;
  s.reason = why;
  return s;
}

void require(const LockerSession& s, LockerState expected, std::string_view op) {
  if (s.state != expected)
    throw Error(ErrorCode::OutOfOrder, std::string(op) + " called in state " +
                                           std::string(to_string(s.state)));
}

} // namespace

std::string_view to_string(LockerState s) noexcept {
  switch (s) {
  case LockerState::Idle: return "Idle";
  case LockerState::UserVerified: return "UserVerified";
  case LockerState::ProviderVerified: return "ProviderVerified";
  case LockerState::ChallengeSent: return "ChallengeSent";
  case LockerState::Open: return "Open";
  case LockerState::Failed: return "Failed";
  }
  return "Unknown";
}

std::string_view to_string(UserState s) noexcept {
  switch (s) {
  case UserState::Idle: return "Idle";
  case UserState::AwaitingChallenge: return "AwaitingChallenge";
  case UserState::AckSent: return "AckSent";
  case UserState::Opened: return "Opened";
  case UserState::Failed: return "Failed";
  }
  return "Unknown";
}

std::string_view to_string(FailureReason r) noexcept {
  switch (r) {
  case FailureReason::None: return "None";
  case FailureReason::BadUserKey: return "BadUserKey";
  case FailureReason::BadProviderKey: return "BadProviderKey";
  case FailureReason::BlobAuthFailure: return "BlobAuthFailure";
  case FailureReason::ChallengeAuthFailure: return "ChallengeAuthFailure";
  case FailureReason::PhraseMismatch: return "PhraseMismatch";
  case FailureReason::BadAck: return "BadAck";
  case FailureReason::Timeout: return "Timeout";
  case FailureReason::Aborted: return "Aborted";
  case FailureReason::ReplayedNonce: return "ReplayedNonce";
  case FailureReason::UnknownUser: return "UnknownUser";
  case FailureReason::LockerRejected: return "LockerRejected";
  }
  return "Unknown";
}

LockerRecord make_record(const UserId& user, const crypto::SecretKey& user_key,
                         const SecretPhrase& phrase, const crypto::Digest& h_r,
                         crypto::RandomSource& rng) {
  auto d_u = user_digest(user, user_key);
  auto plain = encode_fields({phrase.bytes(), user_key.reveal(), user.bytes()});
  auto sealed = crypto::seal(locker_key(d_u, h_r), plain, rng);
  crypto::secure_wipe(plain);
  return {user, d_u, std::move(sealed)};
}

UserStart user_begin_session(const UserId& user, const crypto::SecretKey& user_key,
                             crypto::RandomSource& rng) {
  auto n_a = crypto::fresh_nonce(rng);
  auto proof = crypto::prf(user_digest(user, user_key), n_a.view());
  UserSession s(user);
  s.state = UserState::AwaitingChallenge;
  s.n_a = n_a;
  return {make_auth_request(user, proof, n_a), std::move(s)};
}

LockerSession locker_verify_auth(const LockerRecord& record, const Message& msg) {
  auto req = read_auth_request(msg);
  if (req.user != record.user_id)
    throw Error(ErrorCode::InvalidArgument, "auth request is for a different user");
  LockerSession s(record.user_id);
  auto expected = crypto::prf(record.d_u, req.n_a.view());
  if (!(expected == req.proof))
    return fail(std::move(s), FailureReason::BadUserKey);
  s.state = LockerState::UserVerified;
  s.n_a = req.n_a;
  return s;
}

LockerSession locker_verify_provider(const crypto::Digest& stored_h_r, const crypto::SecretKey& r,
                                     LockerSession state) {
  require(state, LockerState::UserVerified, "locker_verify_provider");
  if (!(provider_digest(r) == stored_h_r))
    return fail(std::move(state), FailureReason::BadProviderKey);
  state.state = LockerState::ProviderVerified;
  return state;
}

ChallengeStep locker_build_challenge(const LockerRecord& record, const crypto::SecretKey& r,
                                     LockerSession state, Timestamp now,
                                     std::chrono::milliseconds ack_timeout,
                                     crypto::RandomSource& rng) {
  require(state, LockerState::ProviderVerified, "locker_build_challenge");
  auto key = locker_key(record.d_u, provider_digest(r));

  Bytes plain;
  try {
    plain = crypto::open(key, record.sealed);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::AuthFailure)
      throw;
    return {fail(std::move(state), FailureReason::BlobAuthFailure), std::nullopt};
  }
  std::vector<Bytes> parts;
  try {
    parts = decode_fields(plain);
  } catch (const Error&) {
    crypto::secure_wipe(plain);
    return {fail(std::move(state), FailureReason::BlobAuthFailure), std::nullopt};
  }
  crypto::secure_wipe(plain);
  if (parts.size() != 3 || !crypto::ct_equal(parts[2], record.user_id.bytes())) {
    for (auto& p : parts)
      crypto::secure_wipe(p);
    return {fail(std::move(state), FailureReason::BlobAuthFailure), std::nullopt};
  }
  const Bytes& phrase = parts[0];
  crypto::SecretKey user_key(parts[1]);
  crypto::secure_wipe(parts[1]);

  auto k_s = session_key(record.user_id, user_key, *state.n_a);
  auto n_r = crypto::fresh_nonce(rng);
  auto body = encode_fields({phrase, n_r.view()});
  auto sealed = crypto::seal(k_s, body, rng);
  crypto::secure_wipe(body);
  crypto::secure_wipe(parts[0]);

  state.state = LockerState::ChallengeSent;
  state.n_r = n_r;
  state.k_s = k_s;
  state.locker_key = key;
  state.deadline = now + ack_timeout;
  return {std::move(state), make_challenge(record.user_id, sealed)};
}

UserStep user_process_challenge(UserSession state, const UserId& user,
                                const crypto::SecretKey& user_key, const SecretPhrase& held_phrase,
                                const Message& msg) {
  if (state.state != UserState::AwaitingChallenge || !state.n_a)
    throw Error(ErrorCode::OutOfOrder, "user_process_challenge called in state " +
                                           std::string(to_string(state.state)));
  auto ct = read_challenge(msg);
  auto k_s = session_key(user, user_key, *state.n_a);

  Bytes plain;
  try {
    plain = crypto::open(k_s, ct);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::AuthFailure)
      throw;
    return {fail(std::move(state), FailureReason::ChallengeAuthFailure), std::nullopt};
  }
  std::vector<Bytes> parts;
  try {
    parts = decode_fields(plain);
  } catch (const Error&) {
    return {fail(std::move(state), FailureReason::PhraseMismatch), std::nullopt};
  }
  if (parts.size() != 2 || parts[1].size() != crypto::Nonce::size_bytes ||
      !crypto::ct_equal(parts[0], held_phrase.bytes()))
    return {fail(std::move(state), FailureReason::PhraseMismatch), std::nullopt};

  auto n_r = crypto::Nonce::from(parts[1]);
  state.state = UserState::AckSent;
  state.n_r = n_r;
  state.k_s = k_s;
  auto ack = make_ack(user, ack_digest(*state.n_a, n_r));
  return {std::move(state), std::move(ack)};
}

UserSession user_process_outcome(UserSession state, const Message& msg) {
  validate(msg);
  if (msg.kind == MessageKind::Result) {
    if (state.state == UserState::AckSent && msg.fields[1][0] == result_open)
      state.state = UserState::Opened;
    return state;
  }
  if (msg.kind == MessageKind::Error) {
    if (state.state == UserState::Opened || state.state == UserState::Failed)
      return state;
    state.locker_reason = static_cast<WireReason>(msg.fields[1][0]);
    return fail(std::move(state), FailureReason::LockerRejected);
  }
  return state;
}

LockerSession locker_verify_ack(LockerSession state, const Message& msg, Timestamp now) {
  require(state, LockerState::ChallengeSent, "locker_verify_ack");
  auto digest = read_ack(msg);
  if (now > *state.deadline)
    return fail(std::move(state), FailureReason::Timeout);
  if (!(digest == ack_digest(*state.n_a, *state.n_r)))
    return fail(std::move(state), FailureReason::BadAck);
  state.state = LockerState::Open;
  return state;
}

LockerSession locker_expire(LockerSession state, Timestamp now) {
  if (state.state == LockerState::ChallengeSent && state.deadline && now > *state.deadline)
    return fail(std::move(state), FailureReason::Timeout);
  return state;
}

} // namespace digilock::protocol
