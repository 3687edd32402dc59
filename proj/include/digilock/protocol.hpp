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

// Per-session state machines for the locker and the user agent. Every step
// function is pure given (state, message, now, rng); time enters only
// through the explicit `now` argument.

#include "digilock/crypto.hpp"
#include "digilock/messages.hpp"
#include "digilock/types.hpp"

#include <chrono>
#include <optional>
#include <string_view>

namespace digilock::protocol {

// Monotonic milliseconds on whatever clock drives the actors.
using Timestamp = std::chrono::milliseconds;

inline constexpr std::chrono::milliseconds default_ack_timeout{5000};

enum class LockerState { Idle, UserVerified, ProviderVerified, ChallengeSent, Open, Failed };
enum class UserState { Idle, AwaitingChallenge, AckSent, Opened, Failed };

enum class FailureReason {
  None,
  BadUserKey,
  BadProviderKey,
  BlobAuthFailure,
  ChallengeAuthFailure,
  PhraseMismatch,
  BadAck,
  Timeout,
  Aborted,
  ReplayedNonce,
  UnknownUser,
  LockerRejected,
};

std::string_view to_string(LockerState s) noexcept;
std::string_view to_string(UserState s) noexcept;
std::string_view to_string(FailureReason r) noexcept;

struct LockerSession {
  explicit LockerSession(UserId u) : user(std::move(u)) {}

  UserId user;
  LockerState state = LockerState::Idle;
  FailureReason reason = FailureReason::None;
  std::optional<crypto::Nonce> n_a;
  std::optional<crypto::Nonce> n_r;
  // Set when the challenge is built (step 3), never before.
  std::optional<crypto::Digest> k_s;
  // L, kept only so an opened session can derive its vault key.
  std::optional<crypto::Digest> locker_key;
  std::optional<Timestamp> deadline;

  bool terminal() const noexcept {
    return state == LockerState::Open || state == LockerState::Failed;
  }
  friend bool operator==(const LockerSession&, const LockerSession&) = default;
};

struct UserSession {
  explicit UserSession(UserId u) : user(std::move(u)) {}

  UserId user;
  UserState state = UserState::Idle;
  FailureReason reason = FailureReason::None;
  std::optional<crypto::Nonce> n_a;
  std::optional<crypto::Nonce> n_r;
  std::optional<crypto::Digest> k_s;
  std::optional<WireReason> locker_reason;

  friend bool operator==(const UserSession&, const UserSession&) = default;
};

// Setup phase: D_u = h(U_i || K_i), L = D_u xor h_R, sealed = E_L(m || K_i || U_i).
LockerRecord make_record(const UserId& user, const crypto::SecretKey& user_key,
                         const SecretPhrase& phrase, const crypto::Digest& h_r,
                         crypto::RandomSource& rng);

struct UserStart {
  Message request;
  UserSession state;
};

// Fresh N_a; AuthRequest = [U_i, PRF_{D_u}(N_a), N_a].
UserStart user_begin_session(const UserId& user, const crypto::SecretKey& user_key,
                             crypto::RandomSource& rng);

// UserVerified iff PRF_{record.d_u}(N_a) matches; otherwise Failed(BadUserKey).
// Throws MalformedMessage for a non-AuthRequest, InvalidArgument if the
// request names a different user than the record.
LockerSession locker_verify_auth(const LockerRecord& record, const Message& msg);

// Throws OutOfOrder unless `state` is UserVerified.
LockerSession locker_verify_provider(const crypto::Digest& stored_h_r, const crypto::SecretKey& r,
                                     LockerSession state);

struct ChallengeStep {
  LockerSession state;
  std::optional<Message> challenge;
};

// Locker access steps 1-5. Recomputes L from `r`, opens the registration
// blob, derives K_s = h(U_i || K_i || N_a), draws N_r and seals (m || N_r)
// under K_s. A blob that fails to open yields Failed(BlobAuthFailure) and no
// challenge. Throws OutOfOrder unless `state` is ProviderVerified.
ChallengeStep locker_build_challenge(const LockerRecord& record, const crypto::SecretKey& r,
                                     LockerSession state, Timestamp now,
                                     std::chrono::milliseconds ack_timeout,
                                     crypto::RandomSource& rng);

struct UserStep {
  UserSession state;
  std::optional<Message> ack;
};

// Opens the challenge under the user's own K_s and compares m against the
// held copy. Ack = h(N_a || N_r) only when both succeed; otherwise the state
// records ChallengeAuthFailure or PhraseMismatch and no ack is produced.
// Throws OutOfOrder unless the user is AwaitingChallenge.
UserStep user_process_challenge(UserSession state, const UserId& user,
                                const crypto::SecretKey& user_key, const SecretPhrase& held_phrase,
                                const Message& msg);

// Result/Error from the locker.
UserSession user_process_outcome(UserSession state, const Message& msg);

// Open iff on time and the digest matches; Failed(Timeout) when late,
// Failed(BadAck) otherwise. Throws OutOfOrder unless ChallengeSent.
LockerSession locker_verify_ack(LockerSession state, const Message& msg, Timestamp now);

// Ends a ChallengeSent session whose deadline has passed.
LockerSession locker_expire(LockerSession state, Timestamp now);

} // namespace digilock::protocol
