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

// The three protocol actors. Each consumes a decoded Message and returns the
// messages it wants sent; routing is the caller's job. None of them reads a
// clock or touches the filesystem.

#include "digilock/protocol.hpp"
#include "digilock/registry.hpp"

#include <map>
#include <memory>
#include <set>
#include <string_view>
#include <vector>

namespace digilock::protocol {

enum class Endpoint { User, Provider, Locker };
std::string_view to_string(Endpoint e) noexcept;

struct Outbound {
  Endpoint to;
  Message msg;
};

class UserAgent {
public:
  UserAgent(UserId user, crypto::SecretKey user_key, SecretPhrase held_phrase);

  // Begins a new session; any previous one is discarded.
  Outbound start(crypto::RandomSource& rng);
  std::vector<Outbound> handle(const Message& msg);

  const UserId& user() const noexcept { return user_; }
  const UserSession& session() const noexcept { return session_; }

  friend bool operator==(const UserAgent&, const UserAgent&) = default;

private:
  UserId user_;
  crypto::SecretKey key_;
  SecretPhrase phrase_;
  UserSession session_;
};

// Holds R and answers the locker's key requests. It has no handle on the
// registry or vault.
class ServiceProvider {
public:
  explicit ServiceProvider(crypto::SecretKey provider_key);

  std::vector<Outbound> handle(const Message& msg) const;

  friend bool operator==(const ServiceProvider&, const ServiceProvider&) = default;

private:
  crypto::SecretKey key_;
};

// Capability proving an Open locker session. Only LockerModule mints these.
class OpenGrant {
public:
  const UserId& user() const noexcept { return user_; }
  const crypto::Digest& locker_key() const noexcept { return key_; }

private:
  friend class LockerModule;
  OpenGrant(UserId user, crypto::Digest key) : user_(std::move(user)), key_(key) {}

  UserId user_;
  crypto::Digest key_;
};

struct LockerOptions {
  std::chrono::milliseconds ack_timeout = default_ack_timeout;
  // Reject AuthRequests whose N_a was already seen. Off by default: the
  // protocol accepts a replayed request and defeats it at the ack.
  bool reject_seen_nonces = false;
};

class LockerModule {
public:
  LockerModule(std::shared_ptr<const store::Registry> registry, LockerOptions options = {});

  // `from` is the endpoint the message arrived from. ProviderKey is only
  // accepted from the provider. Malformed or out-of-sequence input is
  // dropped without a state change.
  std::vector<Outbound> handle(Endpoint from, const Message& msg, Timestamp now,
                               crypto::RandomSource& rng);
  // Times out overdue challenges. Returns the Error notifications.
  std::vector<Outbound> expire(Timestamp now);

  const LockerSession* session(const UserId& user) const noexcept;
  const std::map<UserId, LockerSession>& sessions() const noexcept { return sessions_; }
  // Throws SessionNotOpen.
  OpenGrant grant(const UserId& user) const;
  const LockerOptions& options() const noexcept { return options_; }

  friend bool operator==(const LockerModule& a, const LockerModule& b) {
    return a.registry_ == b.registry_ && a.sessions_ == b.sessions_ && a.seen_ == b.seen_;
  }

private:
  std::vector<Outbound> on_auth_request(const Message& msg);
  std::vector<Outbound> on_provider_key(const Message& msg, Timestamp now, crypto::RandomSource& rng);
  std::vector<Outbound> on_ack(const Message& msg, Timestamp now);

  std::shared_ptr<const store::Registry> registry_;
  LockerOptions options_;
  std::map<UserId, LockerSession> sessions_;
  std::set<crypto::Nonce> seen_;
};

} // namespace digilock::protocol
