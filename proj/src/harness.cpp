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

#include "digilock/harness.hpp"

#include "digilock/encoding.hpp"
#include "digilock/registry.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

namespace digilock::sim {

using protocol::LockerOptions;
using protocol::Outbound;
using protocol::ServiceProvider;
using protocol::UserAgent;

namespace {

constexpr std::string_view fixture_user = "alice";
constexpr std::string_view fixture_phrase = "the name of my first bicycle";
constexpr std::size_t fixture_key_size = 16;

crypto::SecretKey random_key(crypto::RandomSource& rng) {
  Bytes b(fixture_key_size);
  rng.fill(b);
  crypto::SecretKey key(b);
  crypto::secure_wipe(b);
  return key;
}

void flip_bit(Bytes& field, std::size_t bit) {
  if (field.empty())
    return;
  bit %= field.size() * 8;
  field[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
}

ScenarioOutcome snapshot(const Network& net, const protocol::UserId& user) {
  ScenarioOutcome out;
  if (const auto* s = net.locker().session(user)) {
    out.locker_state = s->state;
    out.locker_reason = s->reason;
  }
  out.user_state = net.user().session().state;
  out.user_reason = net.user().session().reason;
  out.locker_opened = out.locker_state == LockerState::Open;
  if (out.locker_reason != FailureReason::None)
    out.failure_reason = out.locker_reason;
  return out;
}

// Settles the network and fills in the terminal outcome; records whether the
// locker had a challenge outstanding before timeouts fired.
RunResult finish(Network& net, const protocol::UserId& user,
                 std::optional<FailureReason> adversary_result) {
  const auto* before = net.locker().session(user);
  bool challenged = before && before->state == LockerState::ChallengeSent;
  net.settle();
  RunResult r{snapshot(net, user), net.trace()};
  r.outcome.reached_challenge_sent = challenged || r.outcome.locker_opened;
  r.outcome.adversary_result = adversary_result;
  return r;
}

Network make_network(const Fixture& fx, UserAgent user, ServiceProvider provider,
                     crypto::RandomSource& rng, LockerOptions options) {
  return Network(fx.registry, std::move(user), std::move(provider), options, rng);
}

UserAgent honest_user(const Fixture& fx) {
  return UserAgent(fx.creds.user, fx.creds.user_key, fx.creds.phrase);
}

} // namespace

std::string_view to_string(Strategy s) noexcept {
  switch (s) {
  case Strategy::Passive: return "Passive";
  case Strategy::ReplayRecorder: return "ReplayRecorder";
  case Strategy::ImpersonatingProvider: return "ImpersonatingProvider";
  case Strategy::Tamperer: return "Tamperer";
  }
  return "Unknown";
}

void Adversary::observe(const Message& msg) {
  if (std::find(knowledge.begin(), knowledge.end(), msg) == knowledge.end())
    knowledge.push_back(msg);
}

std::optional<Bytes> Adversary::try_open(const crypto::Ciphertext& ct) const {
  std::vector<crypto::Digest> candidates;
  for (const auto& m : knowledge) {
    for (const auto& f : m.fields) {
      if (f.size() == crypto::Digest::size_bytes)
        candidates.push_back(crypto::Digest::from(f));
      candidates.push_back(crypto::hash(f));
    }
    if (m.kind != protocol::MessageKind::AuthRequest)
      continue;
    auto req = protocol::read_auth_request(m);
    // h(U_i || ? || N_a) with every key it has in place of K_i.
    candidates.push_back(protocol::concat_hash({req.user.bytes(), req.n_a.view()}));
    candidates.push_back(protocol::concat_hash({req.user.bytes(), ByteView{}, req.n_a.view()}));
    for (const auto& k : own_keys) {
      candidates.push_back(protocol::session_key(req.user, k, req.n_a));
      candidates.push_back(crypto::xor_digests(protocol::provider_digest(k), req.proof));
    }
  }
  for (const auto& k : own_keys)
    candidates.push_back(protocol::provider_digest(k));

  for (const auto& key : candidates) {
    try {
      return crypto::open(key, ct);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AuthFailure)
        throw;
    }
  }
  return std::nullopt;
}

Fixture make_fixture(crypto::RandomSource& rng) {
  auto user_key = random_key(rng);
  auto provider_key = random_key(rng);
  protocol::UserId user{std::string(fixture_user)};
  protocol::SecretPhrase phrase{std::string(fixture_phrase)};
  auto registry = std::make_shared<store::Registry>();
  registry->provision(provider_key);
  store::register_user(*registry, user, user_key, phrase, rng);
  return {std::move(registry), {user, user_key, phrase, provider_key}};
}

crypto::SecretKey random_key_other_than(const crypto::SecretKey& avoid, crypto::RandomSource& rng) {
  for (;;) {
    auto k = random_key(rng);
    if (!(k == avoid))
      return k;
  }
}

Network::Network(std::shared_ptr<const store::Registry> registry, UserAgent user,
                 ServiceProvider provider, LockerOptions options, crypto::RandomSource& rng)
    : registry_(registry), user_(std::move(user)), provider_(std::move(provider)),
      locker_(std::move(registry), options), rng_(rng) {}

void Network::start_user() {
  auto out = user_.start(rng_);
  enqueue(Endpoint::User, {std::move(out)});
}

void Network::inject(Envelope env, Verdict verdict) {
  queue_.push_back({std::move(env), verdict, false});
}

void Network::enqueue(Endpoint from, std::vector<Outbound> out) {
  for (auto& o : out) {
    Envelope env{from, o.to, std::move(o.msg)};
    bool seat = env.via_provider() && static_cast<bool>(hook_);
    queue_.push_back({std::move(env), Verdict::Delivered, seat});
  }
}

bool Network::deliver_next() {
  if (head_ == queue_.size())
    return false;
  Pending p = std::move(queue_[head_++]);
  now_ += hop_latency;

  std::vector<Forward> forwards;
  if (p.through_seat)
    forwards = hook_(p.env);
  else
    forwards.push_back({p.env, p.verdict});
  if (forwards.empty())
    forwards.push_back({p.env, Verdict::Dropped});

  for (const auto& f : forwards) {
    trace_.record({now_.count(), f.env.from, f.env.to, f.env.via_provider(), f.env.msg.kind,
                   payload_digest(f.env.msg), f.verdict});
    if (f.verdict != Verdict::Dropped)
      dispatch(f.env);
  }
  return true;
}

void Network::dispatch(const Envelope& env) {
  switch (env.to) {
  case Endpoint::User:
    enqueue(Endpoint::User, user_.handle(env.msg));
    break;
  case Endpoint::Provider:
    enqueue(Endpoint::Provider, provider_.handle(env.msg));
    break;
  case Endpoint::Locker:
    enqueue(Endpoint::Locker, locker_.handle(env.from, env.msg, now_, rng_));
    break;
  }
}

void Network::run() {
  while (deliver_next()) {
  }
}

void Network::settle() {
  Timestamp latest = now_;
  for (const auto& [user, s] : locker_.sessions()) {
    if (s.deadline)
      latest = std::max(latest, *s.deadline);
  }
  now_ = latest + std::chrono::milliseconds{1};
  enqueue(Endpoint::Locker, locker_.expire(now_));
  run();
}

RunResult run_honest_session(const Fixture& fx, crypto::RandomSource& rng, LockerOptions options) {
  auto net = make_network(fx, honest_user(fx), ServiceProvider(fx.creds.provider_key), rng, options);
  net.start_user();
  net.run();
  return finish(net, fx.creds.user, std::nullopt);
}

RunResult run_repudiation_scenario(RepudiationVariant variant, const Fixture& fx,
                                   crypto::RandomSource& rng, LockerOptions options) {
  auto user_key = fx.creds.user_key;
  auto provider_key = fx.creds.provider_key;
  if (variant == RepudiationVariant::WrongUserKey)
    user_key = random_key_other_than(user_key, rng);
  else if (variant == RepudiationVariant::WrongProviderKey)
    provider_key = random_key_other_than(provider_key, rng);
  auto net = make_network(fx, UserAgent(fx.creds.user, user_key, fx.creds.phrase),
                          ServiceProvider(provider_key), rng, options);
  net.start_user();
  net.run();
  return finish(net, fx.creds.user, std::nullopt);
}

RunResult run_replay_scenario(const Fixture& fx, crypto::RandomSource& rng, LockerOptions options) {
  Adversary adv{Strategy::ReplayRecorder, {}, {}};
  bool attacking = false;
  std::optional<Envelope> recorded_request;
  std::optional<FailureReason> adversary_result;

  auto net = make_network(fx, honest_user(fx), ServiceProvider(fx.creds.provider_key), rng, options);
  net.set_seat_hook([&](const Envelope& env) -> std::vector<Forward> {
    adv.observe(env.msg);
    if (!attacking) {
      if (env.msg.kind == protocol::MessageKind::AuthRequest && !recorded_request)
        recorded_request = env;
      return {{env, Verdict::Delivered}};
    }
    if (env.msg.kind == protocol::MessageKind::AuthRequest && env.from == Endpoint::User)
      return {{env, Verdict::Dropped}, {*recorded_request, Verdict::Replayed}};
    if (env.msg.kind == protocol::MessageKind::Challenge) {
      auto opened = adv.try_open(protocol::read_challenge(env.msg));
      adversary_result = opened ? FailureReason::None : FailureReason::ChallengeAuthFailure;
    }
    return {{env, Verdict::Delivered}};
  });

  net.start_user();
  net.run();
  attacking = true;
  net.start_user();
  net.run();
  return finish(net, fx.creds.user, adversary_result);
}

RunResult run_impersonation_scenario(const Fixture& fx, crypto::RandomSource& rng,
                                     LockerOptions options, bool forward_challenge) {
  Adversary adv{Strategy::ImpersonatingProvider, {}, {fx.creds.provider_key}};
  std::optional<FailureReason> adversary_result;

  auto net = make_network(fx, honest_user(fx), ServiceProvider(fx.creds.provider_key), rng, options);
  net.set_seat_hook([&](const Envelope& env) -> std::vector<Forward> {
    adv.observe(env.msg);
    if (env.msg.kind != protocol::MessageKind::Challenge)
      return {{env, Verdict::Delivered}};
    auto opened = adv.try_open(protocol::read_challenge(env.msg));
    adversary_result = opened ? FailureReason::None : FailureReason::ChallengeAuthFailure;
    if (forward_challenge)
      return {{env, Verdict::Delivered}};
    return {{env, Verdict::Dropped}};
  });
  net.start_user();
  net.run();
  return finish(net, fx.creds.user, adversary_result);
}

RunResult run_tamper_scenario(TamperTarget target, std::size_t bit, const Fixture& fx,
                              crypto::RandomSource& rng, LockerOptions options) {
  using protocol::MessageKind;
  MessageKind kind = MessageKind::AuthRequest;
  std::size_t field = 1;
  switch (target) {
  case TamperTarget::PrfField: kind = MessageKind::AuthRequest; field = 1; break;
  case TamperTarget::ChallengeBody: kind = MessageKind::Challenge; field = 2; break;
  case TamperTarget::AckDigest: kind = MessageKind::Ack; field = 1; break;
  }
  bool done = false;
  auto net = make_network(fx, honest_user(fx), ServiceProvider(fx.creds.provider_key), rng, options);
  net.set_seat_hook([&](const Envelope& env) -> std::vector<Forward> {
    if (done || env.msg.kind != kind)
      return {{env, Verdict::Delivered}};
    done = true;
    Envelope altered = env;
    flip_bit(altered.msg.fields[field], bit);
    return {{altered, Verdict::Modified}};
  });
  net.start_user();
  net.run();
  return finish(net, fx.creds.user, std::nullopt);
}

std::string ScenarioOutcome::to_json() const {
  auto opt = [](const std::optional<FailureReason>& r) {
    return r ? nlohmann::ordered_json(protocol::to_string(*r)) : nlohmann::ordered_json(nullptr);
  };
  nlohmann::ordered_json j;
  j["locker_opened"] = locker_opened;
  j["locker_state"] = protocol::to_string(locker_state);
  j["locker_reason"] = protocol::to_string(locker_reason);
  j["user_state"] = protocol::to_string(user_state);
  j["user_reason"] = protocol::to_string(user_reason);
  j["failure_reason"] = opt(failure_reason);
  j["reached_challenge_sent"] = reached_challenge_sent;
  j["adversary_result"] = opt(adversary_result);
  return j.dump();
}

std::string_view to_string(ScenarioKind k) noexcept {
  switch (k) {
  case ScenarioKind::Honest: return "honest";
  case ScenarioKind::Replay: return "replay";
  case ScenarioKind::Impersonation: return "impersonation";
  case ScenarioKind::RepudiationUser: return "repudiation-user";
  case ScenarioKind::RepudiationProvider: return "repudiation-provider";
  case ScenarioKind::Tamper: return "tamper";
  }
  return "unknown";
}

ScenarioKind scenario_from_string(std::string_view name) {
  for (auto k : {ScenarioKind::Honest, ScenarioKind::Replay, ScenarioKind::Impersonation,
                 ScenarioKind::RepudiationUser, ScenarioKind::RepudiationProvider,
                 ScenarioKind::Tamper}) {
    if (to_string(k) == name)
      return k;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown scenario '" + std::string(name) + "'");
}

ScenarioConfig ScenarioConfig::from_json(std::string_view text) {
  ScenarioConfig cfg;
  try {
    auto j = nlohmann::json::parse(text);
    cfg.scenario = scenario_from_string(j.at("scenario").get<std::string>());
    if (j.contains("seed") && !j.at("seed").is_null())
      cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("variant") && !j.at("variant").is_null())
      cfg.variant = j.at("variant").get<std::string>();
    if (j.contains("timeout_ms"))
      cfg.timeout_ms = j.at("timeout_ms").get<std::uint64_t>();
    if (j.contains("tamper_bit"))
      cfg.tamper_bit = j.at("tamper_bit").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("scenario file: ") + e.what());
  }
  if (cfg.timeout_ms < 1)
    throw Error(ErrorCode::InvalidArgument, "timeout_ms must be at least 1");
  return cfg;
}

namespace {

TamperTarget tamper_target(const std::string& variant) {
  if (variant.empty() || variant == "prf")
    return TamperTarget::PrfField;
  if (variant == "challenge")
    return TamperTarget::ChallengeBody;
  if (variant == "ack")
    return TamperTarget::AckDigest;
  throw Error(ErrorCode::InvalidArgument, "tamper variant must be prf, challenge or ack");
}

bool control_variant(const ScenarioConfig& cfg) {
  if (cfg.variant.empty())
    return false;
  if (cfg.variant == "control")
    return true;
  throw Error(ErrorCode::InvalidArgument,
              "variant '" + cfg.variant + "' is not valid for " + std::string(to_string(cfg.scenario)));
}

} // namespace

bool matches_expected(const ScenarioConfig& cfg, const ScenarioOutcome& o) {
  auto shut_with = [&](FailureReason r) { return !o.locker_opened && o.failure_reason == r; };
  switch (cfg.scenario) {
  case ScenarioKind::Honest:
    return o.locker_opened && o.user_state == UserState::Opened;
  case ScenarioKind::RepudiationUser:
    return control_variant(cfg) ? o.locker_opened : shut_with(FailureReason::BadUserKey);
  case ScenarioKind::RepudiationProvider:
    return control_variant(cfg) ? o.locker_opened : shut_with(FailureReason::BadProviderKey);
  case ScenarioKind::Replay:
    return shut_with(FailureReason::Timeout) && o.reached_challenge_sent &&
           o.adversary_result == FailureReason::ChallengeAuthFailure &&
           o.user_reason == FailureReason::ChallengeAuthFailure;
  case ScenarioKind::Impersonation:
    if (o.adversary_result != FailureReason::ChallengeAuthFailure)
      return false;
    return control_variant(cfg) ? o.locker_opened : shut_with(FailureReason::Timeout);
  case ScenarioKind::Tamper:
    switch (tamper_target(cfg.variant)) {
    case TamperTarget::PrfField: return shut_with(FailureReason::BadUserKey);
    case TamperTarget::ChallengeBody:
      return shut_with(FailureReason::Timeout) && o.user_reason == FailureReason::ChallengeAuthFailure;
    case TamperTarget::AckDigest: return shut_with(FailureReason::BadAck);
    }
  }
  return false;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  std::optional<crypto::SeededRandom> seeded;
  if (cfg.seed)
    seeded.emplace(*cfg.seed);
  crypto::RandomSource& rng = seeded ? static_cast<crypto::RandomSource&>(*seeded)
                                     : static_cast<crypto::RandomSource&>(crypto::system_random());
  LockerOptions options;
  options.ack_timeout = std::chrono::milliseconds(cfg.timeout_ms);

  auto fx = make_fixture(rng);
  RunResult run;
  switch (cfg.scenario) {
  case ScenarioKind::Honest:
    run = run_honest_session(fx, rng, options);
    break;
  case ScenarioKind::RepudiationUser:
    run = run_repudiation_scenario(control_variant(cfg) ? RepudiationVariant::Control
                                                        : RepudiationVariant::WrongUserKey,
                                   fx, rng, options);
    break;
  case ScenarioKind::RepudiationProvider:
    run = run_repudiation_scenario(control_variant(cfg) ? RepudiationVariant::Control
                                                        : RepudiationVariant::WrongProviderKey,
                                   fx, rng, options);
    break;
  case ScenarioKind::Replay:
    if (!cfg.variant.empty())
      throw Error(ErrorCode::InvalidArgument, "replay takes no variant");
    run = run_replay_scenario(fx, rng, options);
    break;
  case ScenarioKind::Impersonation:
    run = run_impersonation_scenario(fx, rng, options, control_variant(cfg));
    break;
  case ScenarioKind::Tamper:
    run = run_tamper_scenario(tamper_target(cfg.variant), cfg.tamper_bit, fx, rng, options);
    break;
  }
  ScenarioResult result{cfg, std::move(run), false};
  result.matches_expected = matches_expected(cfg, result.run.outcome);
  return result;
}

} // namespace digilock::sim
