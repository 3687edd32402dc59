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

// Deterministic simulated network for the three actors. User<->locker
// traffic always crosses the provider seat, where an adversary hook may
// observe, drop, alter or replace it. Time is an explicit millisecond
// counter; nothing sleeps.

#include "digilock/actors.hpp"
#include "digilock/trace.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace digilock::sim {

using protocol::FailureReason;
using protocol::LockerState;
using protocol::Message;
using protocol::Timestamp;
using protocol::UserState;

inline constexpr std::chrono::milliseconds hop_latency{10};

struct Envelope {
  Endpoint from{};
  Endpoint to{};
  Message msg;

  // User<->locker messages are relayed by the provider.
  bool via_provider() const noexcept {
    return (from == Endpoint::User && to == Endpoint::Locker) ||
           (from == Endpoint::Locker && to == Endpoint::User);
  }
  friend bool operator==(const Envelope&, const Envelope&) = default;
};

enum class Strategy { Passive, ReplayRecorder, ImpersonatingProvider, Tamperer };
std::string_view to_string(Strategy s) noexcept;

// What an attacker has seen. Only messages that crossed a channel it sits
// on, plus public values; never K_i or locker-internal state.
struct Adversary {
  Strategy strategy = Strategy::Passive;
  std::vector<Message> knowledge;
  // Keys it legitimately holds, e.g. R when the provider itself is hostile.
  std::vector<crypto::SecretKey> own_keys;

  void observe(const Message& msg);
  // Tries every key derivable from knowledge (no cryptanalysis). Returns the
  // plaintext on success.
  std::optional<Bytes> try_open(const crypto::Ciphertext& ct) const;
};

// A routed delivery decision from the adversary seat.
struct Forward {
  Envelope env;
  Verdict verdict = Verdict::Delivered;
};

// Called for each envelope reaching the provider seat. Returning nothing
// drops the message.
using SeatHook = std::function<std::vector<Forward>(const Envelope&)>;

struct Credentials {
  protocol::UserId user;
  crypto::SecretKey user_key;
  protocol::SecretPhrase phrase;
  crypto::SecretKey provider_key;
};

// A provisioned registry with one registered user.
struct Fixture {
  std::shared_ptr<const store::Registry> registry;
  Credentials creds;
};

// Random 16-byte keys, user "alice", fixed phrase. Draws from `rng`.
Fixture make_fixture(crypto::RandomSource& rng);
crypto::SecretKey random_key_other_than(const crypto::SecretKey& avoid, crypto::RandomSource& rng);

class Network {
public:
  Network(std::shared_ptr<const store::Registry> registry, protocol::UserAgent user,
          protocol::ServiceProvider provider, protocol::LockerOptions options,
          crypto::RandomSource& rng);

  void set_seat_hook(SeatHook hook) { hook_ = std::move(hook); }

  void start_user();
  // Puts an adversary-made envelope on the wire, bypassing the hook.
  void inject(Envelope env, Verdict verdict);
  bool deliver_next();
  void run();
  // Moves the clock past every pending deadline and lets timeouts fire.
  void settle();
  void advance(std::chrono::milliseconds dt) { now_ += dt; }

  Timestamp now() const noexcept { return now_; }
  const Trace& trace() const noexcept { return trace_; }
  const protocol::UserAgent& user() const noexcept { return user_; }
  protocol::LockerModule& locker() noexcept { return locker_; }
  const protocol::LockerModule& locker() const noexcept { return locker_; }

private:
  struct Pending {
    Envelope env;
    Verdict verdict;
    bool through_seat;
  };

  void enqueue(Endpoint from, std::vector<protocol::Outbound> out);
  void dispatch(const Envelope& env);

  std::shared_ptr<const store::Registry> registry_;
  protocol::UserAgent user_;
  protocol::ServiceProvider provider_;
  protocol::LockerModule locker_;
  crypto::RandomSource& rng_;
  SeatHook hook_;
  std::vector<Pending> queue_;
  std::size_t head_ = 0;
  Timestamp now_{0};
  Trace trace_;
};

struct ScenarioOutcome {
  LockerState locker_state = LockerState::Idle;
  FailureReason locker_reason = FailureReason::None;
  UserState user_state = UserState::Idle;
  FailureReason user_reason = FailureReason::None;
  bool locker_opened = false;
  std::optional<FailureReason> failure_reason;
  // Whether the locker ever issued a challenge in the attacked session.
  bool reached_challenge_sent = false;
  // For attack scenarios: result of the adversary's own attempt to open
  // the challenge (ChallengeAuthFailure when it could not).
  std::optional<FailureReason> adversary_result;

  std::string to_json() const;
};

struct RunResult {
  ScenarioOutcome outcome;
  Trace trace;
};

enum class RepudiationVariant { WrongUserKey, WrongProviderKey, Control };
enum class TamperTarget { PrfField, ChallengeBody, AckDigest };

RunResult run_honest_session(const Fixture& fx, crypto::RandomSource& rng,
                             protocol::LockerOptions options = {});
RunResult run_repudiation_scenario(RepudiationVariant variant, const Fixture& fx,
                                   crypto::RandomSource& rng, protocol::LockerOptions options = {});
// Records one honest session, then substitutes its AuthRequest for the
// user's fresh one.
RunResult run_replay_scenario(const Fixture& fx, crypto::RandomSource& rng,
                              protocol::LockerOptions options = {});
// The provider seat forwards the genuine request and supplies R, then keeps
// the challenge for itself. With `forward_challenge` it passes the
// challenge on after trying, and the honest user completes the session.
RunResult run_impersonation_scenario(const Fixture& fx, crypto::RandomSource& rng,
                                     protocol::LockerOptions options = {},
                                     bool forward_challenge = false);
// Flips bit `bit` (taken modulo the field's bit length) of the target field.
RunResult run_tamper_scenario(TamperTarget target, std::size_t bit, const Fixture& fx,
                              crypto::RandomSource& rng, protocol::LockerOptions options = {});

enum class ScenarioKind {
  Honest,
  Replay,
  Impersonation,
  RepudiationUser,
  RepudiationProvider,
  Tamper,
};
std::string_view to_string(ScenarioKind k) noexcept;
// Throws InvalidArgument.
ScenarioKind scenario_from_string(std::string_view name);

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::Honest;
  // Absent: OS CSPRNG, non-reproducible.
  std::optional<std::uint64_t> seed;
  // tamper: "prf" | "challenge" | "ack"; impersonation: "" | "control";
  // repudiation: "" | "control".
  std::string variant;
  std::uint64_t timeout_ms = 5000;
  std::size_t tamper_bit = 0;

  // {"scenario","seed","variant","timeout_ms"}; throws InvalidArgument.
  static ScenarioConfig from_json(std::string_view text);
};

struct ScenarioResult {
  ScenarioConfig config;
  RunResult run;
  bool matches_expected = false;
};

// True when the outcome is what the protocol promises for this scenario:
// honest and control runs open, every attack leaves the locker shut with the
// characteristic failure reason.
bool matches_expected(const ScenarioConfig& config, const ScenarioOutcome& outcome);

ScenarioResult run_scenario(const ScenarioConfig& config);

} // namespace digilock::sim
