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

#include "digilock/actors.hpp"

namespace digilock::protocol {

namespace {

WireReason wire_reason(FailureReason r) noexcept {
  switch (r) {
  case FailureReason::BadUserKey: return WireReason::BadUserKey;
  case FailureReason::BadProviderKey: return WireReason::BadProviderKey;
  case FailureReason::BlobAuthFailure: return WireReason::BlobAuthFailure;
  case FailureReason::BadAck: return WireReason::BadAck;
  case FailureReason::Timeout: return WireReason::Timeout;
  case FailureReason::UnknownUser: return WireReason::UnknownUser;
  default: return WireReason::Aborted;
  }
}

std::optional<UserId> user_of(const Message& msg) noexcept {
  try {
    return read_user(msg);
  } catch (const Error&) {
    return std::nullopt;
  }
}

} // namespace

std::string_view to_string(Endpoint e) noexcept {
  switch (e) {
  case Endpoint::User: return "user";
  case Endpoint::Provider: return "provider";
  case Endpoint::Locker: return "locker";
  }
  return "unknown";
}

UserAgent::UserAgent(UserId user, crypto::SecretKey user_key, SecretPhrase held_phrase)
    : user_(user), key_(std::move(user_key)), phrase_(std::move(held_phrase)), session_(user) {}

Outbound UserAgent::start(crypto::RandomSource& rng) {
  auto started = user_begin_session(user_, key_, rng);
  session_ = std::move(started.state);
  return {Endpoint::Locker, std::move(started.request)};
}

std::vector<Outbound> UserAgent::handle(const Message& msg) {
  auto who = user_of(msg);
  if (!who || *who != user_)
    return {};
  switch (msg.kind) {
  case MessageKind::Challenge: {
    if (session_.state != UserState::AwaitingChallenge)
      return {};
    auto step = user_process_challenge(session_, user_, key_, phrase_, msg);
    session_ = std::move(step.state);
    if (step.ack)
      return {{Endpoint::Locker, std::move(*step.ack)}};
    return {};
  }
  case MessageKind::Result:
  case MessageKind::Error:
    session_ = user_process_outcome(std::move(session_), msg);
    return {};
  default:
    return {};
  }
}

ServiceProvider::ServiceProvider(crypto::SecretKey provider_key) : key_(std::move(provider_key)) {}

std::vector<Outbound> ServiceProvider::handle(const Message& msg) const {
  if (msg.kind != MessageKind::ProviderKeyRequest)
    return {};
  auto who = user_of(msg);
  if (!who)
    return {};
  return {{Endpoint::Locker, make_provider_key(*who, key_)}};
}

LockerModule::LockerModule(std::shared_ptr<const store::Registry> registry, LockerOptions options)
    : registry_(std::move(registry)), options_(options) {
  if (!registry_)
    throw Error(ErrorCode::InvalidArgument, "locker needs a registry");
}

std::vector<Outbound> LockerModule::handle(Endpoint from, const Message& msg, Timestamp now,
                                           crypto::RandomSource& rng) {
  try {
    validate(msg);
  } catch (const Error&) {
    return {};
  }
  switch (msg.kind) {
  case MessageKind::AuthRequest:
    return on_auth_request(msg);
  case MessageKind::ProviderKey:
    if (from != Endpoint::Provider)
      return {};
    return on_provider_key(msg, now, rng);
  case MessageKind::Ack:
    return on_ack(msg, now);
  default:
    return {};
  }
}

std::vector<Outbound> LockerModule::on_auth_request(const Message& msg) {
  auto req = read_auth_request(msg);
  const auto* record = registry_->find(req.user);
  if (!record)
    return {{Endpoint::User, make_error(req.user, WireReason::UnknownUser)}};

  // One live session per user: a new request supersedes the old one.
  sessions_.erase(req.user);

  if (options_.reject_seen_nonces && seen_.contains(req.n_a)) {
    LockerSession s(req.user);
    s.state = LockerState::Failed;
    s.reason = FailureReason::ReplayedNonce;
    sessions_.emplace(req.user, std::move(s));
    return {{Endpoint::User, make_error(req.user, WireReason::Aborted)}};
  }

  auto s = locker_verify_auth(*record, msg);
  if (options_.reject_seen_nonces && s.state == LockerState::UserVerified)
    seen_.insert(req.n_a);
  auto state = s.state;
  sessions_.insert_or_assign(req.user, std::move(s));
  if (state == LockerState::Failed)
    return {{Endpoint::User, make_error(req.user, WireReason::BadUserKey)}};
  return {{Endpoint::Provider, make_provider_key_request(req.user)}};
}

std::vector<Outbound> LockerModule::on_provider_key(const Message& msg, Timestamp now,
                                                    crypto::RandomSource& rng) {
  auto user = read_user(msg);
  auto it = sessions_.find(user);
  if (it == sessions_.end() || it->second.state != LockerState::UserVerified)
    return {};
  auto r = read_provider_key(msg);
  auto verified = locker_verify_provider(registry_->h_r(), r, it->second);
  if (verified.state == LockerState::Failed) {
    it->second = std::move(verified);
    return {{Endpoint::User, make_error(user, WireReason::BadProviderKey)}};
  }
  auto step = locker_build_challenge(registry_->get_record(user), r, std::move(verified), now,
                                     options_.ack_timeout, rng);
  it->second = std::move(step.state);
  if (!step.challenge)
    return {{Endpoint::User, make_error(user, wire_reason(it->second.reason))}};
  return {{Endpoint::User, std::move(*step.challenge)}};
}

std::vector<Outbound> LockerModule::on_ack(const Message& msg, Timestamp now) {
  auto user = read_user(msg);
  auto it = sessions_.find(user);
  if (it == sessions_.end() || it->second.state != LockerState::ChallengeSent)
    return {};
  it->second = locker_verify_ack(std::move(it->second), msg, now);
  if (it->second.state == LockerState::Open)
    return {{Endpoint::User, make_result(user, result_open)}};
  return {{Endpoint::User, make_error(user, wire_reason(it->second.reason))}};
}

std::vector<Outbound> LockerModule::expire(Timestamp now) {
  std::vector<Outbound> out;
  for (auto& [user, s] : sessions_) {
    auto before = s.state;
    s = locker_expire(std::move(s), now);
    if (before != s.state)
      out.push_back({Endpoint::User, make_error(user, WireReason::Timeout)});
  }
  return out;
}

const LockerSession* LockerModule::session(const UserId& user) const noexcept {
  auto it = sessions_.find(user);
  return it == sessions_.end() ? nullptr : &it->second;
}

OpenGrant LockerModule::grant(const UserId& user) const {
  const auto* s = session(user);
  if (!s || s->state != LockerState::Open || !s->locker_key)
    throw Error(ErrorCode::SessionNotOpen, user.str());
  return OpenGrant(user, *s->locker_key);
}

} // namespace digilock::protocol
