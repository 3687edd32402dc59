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

#include <doctest.h>

#include <nlohmann/json.hpp>

#include <sstream>

using namespace digilock;
using namespace digilock::sim;
using protocol::MessageKind;

namespace {

const std::vector<MessageKind> six_kinds = {
    MessageKind::AuthRequest, MessageKind::ProviderKeyRequest, MessageKind::ProviderKey,
    MessageKind::Challenge,   MessageKind::Ack,                MessageKind::Result};

std::vector<nlohmann::json> parse_lines(const std::string& jsonl) {
  std::vector<nlohmann::json> out;
  std::istringstream in(jsonl);
  for (std::string line; std::getline(in, line);)
    out.push_back(nlohmann::json::parse(line));
  return out;
}

} // namespace

TEST_CASE("honest session opens with the six-message sequence") {
  crypto::SeededRandom rng(81);
  auto fx = make_fixture(rng);
  auto r = run_honest_session(fx, rng);
  CHECK(r.outcome.locker_opened);
  CHECK(r.outcome.locker_state == LockerState::Open);
  CHECK(r.outcome.user_state == UserState::Opened);
  CHECK_FALSE(r.outcome.failure_reason);
  CHECK(r.trace.delivered_kinds() == six_kinds);
}

TEST_CASE("user traffic is relayed by the provider and R stays on its own link") {
  crypto::SeededRandom rng(82);
  auto fx = make_fixture(rng);
  auto r = run_honest_session(fx, rng);
  for (const auto& s : r.trace.steps()) {
    bool user_link = s.from == Endpoint::User || s.to == Endpoint::User;
    CHECK(s.via_provider == user_link);
    if (s.kind == MessageKind::ProviderKey) {
      CHECK(s.from == Endpoint::Provider);
      CHECK(s.to == Endpoint::Locker);
    }
  }
  auto lines = parse_lines(r.trace.to_jsonl());
  REQUIRE(lines.size() == r.trace.steps().size());
  CHECK(lines[0]["step"] == 0);
  CHECK(lines[0]["from"] == "user");
  CHECK(lines[0]["to"] == "locker");
  CHECK(lines[0]["via"] == "provider");
  CHECK(lines[1]["via"].is_null());
  CHECK(lines[0]["kind"] == "AuthRequest");
  CHECK(lines[0]["verdict"] == "delivered");
  CHECK(lines[1]["t_ms"].get<int>() > lines[0]["t_ms"].get<int>());
}

TEST_CASE("trace never exposes secrets") {
  crypto::SeededRandom rng(83);
  auto fx = make_fixture(rng);
  auto text = run_honest_session(fx, rng).trace.to_jsonl();
  for (auto secret : {fx.creds.provider_key.reveal(), fx.creds.user_key.reveal()}) {
    CHECK(text.find(crypto::to_hex(secret)) == std::string::npos);
    CHECK(text.find(crypto::to_base64(secret)) == std::string::npos);
    std::string raw(secret.begin(), secret.end());
    CHECK(text.find(raw) == std::string::npos);
  }
  CHECK(text.find(fx.creds.phrase.str()) == std::string::npos);
  // Payload digests are hashes of the message with R redacted, never of R itself.
  auto pk = protocol::make_provider_key(fx.creds.user, fx.creds.provider_key);
  CHECK_FALSE(payload_digest(pk) == crypto::hash(protocol::encode_message(pk)));
}

TEST_CASE("runs are deterministic for a fixed seed") {
  auto once = [](std::uint64_t seed) {
    crypto::SeededRandom rng(seed);
    auto fx = make_fixture(rng);
    return run_replay_scenario(fx, rng).trace.to_jsonl();
  };
  CHECK(once(5) == once(5));
  CHECK(once(5) != once(6));
}

TEST_CASE("repudiation: neither party alone can open") {
  crypto::SeededRandom rng(84);
  for (int i = 0; i < 20; ++i) {
    auto fx = make_fixture(rng);
    auto u = run_repudiation_scenario(RepudiationVariant::WrongUserKey, fx, rng).outcome;
    CHECK_FALSE(u.locker_opened);
    CHECK(u.failure_reason == FailureReason::BadUserKey);
    auto p = run_repudiation_scenario(RepudiationVariant::WrongProviderKey, fx, rng).outcome;
    CHECK_FALSE(p.locker_opened);
    CHECK(p.failure_reason == FailureReason::BadProviderKey);
    CHECK(run_repudiation_scenario(RepudiationVariant::Control, fx, rng).outcome.locker_opened);
  }
}

TEST_CASE("replayed request reaches a challenge nobody can answer") {
  crypto::SeededRandom rng(85);
  for (int i = 0; i < 20; ++i) {
    auto fx = make_fixture(rng);
    auto r = run_replay_scenario(fx, rng);
    CHECK(r.outcome.reached_challenge_sent);
    CHECK(r.outcome.adversary_result == FailureReason::ChallengeAuthFailure);
    CHECK(r.outcome.user_reason == FailureReason::ChallengeAuthFailure);
    CHECK(r.outcome.locker_state == LockerState::Failed);
    CHECK(r.outcome.failure_reason == FailureReason::Timeout);
    CHECK_FALSE(r.outcome.locker_opened);
    bool replayed = false;
    for (const auto& s : r.trace.steps())
      replayed |= s.verdict == Verdict::Replayed && s.kind == MessageKind::AuthRequest;
    CHECK(replayed);
  }
}

TEST_CASE("provider posing as the user cannot read the challenge") {
  crypto::SeededRandom rng(86);
  for (int i = 0; i < 20; ++i) {
    auto fx = make_fixture(rng);
    auto r = run_impersonation_scenario(fx, rng);
    CHECK(r.outcome.adversary_result == FailureReason::ChallengeAuthFailure);
    CHECK(r.outcome.failure_reason == FailureReason::Timeout);
    CHECK_FALSE(r.outcome.locker_opened);
    // Passing the challenge on to the real user lets the session complete,
    // since only the user holds K_i.
    auto fwd = run_impersonation_scenario(fx, rng, {}, true);
    CHECK(fwd.outcome.adversary_result == FailureReason::ChallengeAuthFailure);
    CHECK(fwd.outcome.locker_opened);
  }
}

TEST_CASE("adversary without K_i cannot open a sealed challenge") {
  crypto::SeededRandom rng(87);
  auto fx = make_fixture(rng);
  Adversary adv;
  adv.own_keys.push_back(fx.creds.provider_key);
  auto start = protocol::user_begin_session(fx.creds.user, fx.creds.user_key, rng);
  adv.observe(start.request);
  auto k_s = protocol::session_key(fx.creds.user, fx.creds.user_key, *start.state.n_a);
  auto ct = crypto::seal(k_s, as_bytes("secret"), rng);
  CHECK_FALSE(adv.try_open(ct));
  adv.own_keys.push_back(fx.creds.user_key);
  CHECK(adv.try_open(ct) == to_bytes("secret"));
}

TEST_CASE("property: any single bit flip on a critical field keeps the locker shut") {
  crypto::SeededRandom rng(88);
  auto fx = make_fixture(rng);
  for (std::size_t bit = 0; bit < 256; ++bit) {
    auto prf = run_tamper_scenario(TamperTarget::PrfField, bit, fx, rng).outcome;
    CHECK_FALSE(prf.locker_opened);
    CHECK(prf.failure_reason == FailureReason::BadUserKey);
    auto ack = run_tamper_scenario(TamperTarget::AckDigest, bit, fx, rng).outcome;
    CHECK_FALSE(ack.locker_opened);
    CHECK(ack.failure_reason == FailureReason::BadAck);
  }
  for (std::size_t bit = 0; bit < 8 * 46; bit += 3) {
    auto ch = run_tamper_scenario(TamperTarget::ChallengeBody, bit, fx, rng).outcome;
    CHECK_FALSE(ch.locker_opened);
    CHECK(ch.user_reason == FailureReason::ChallengeAuthFailure);
    CHECK(ch.failure_reason == FailureReason::Timeout);
  }
}

TEST_CASE("dropping every seat message leaves the locker shut") {
  crypto::SeededRandom rng(89);
  auto fx = make_fixture(rng);
  Network net(fx.registry,
              protocol::UserAgent(fx.creds.user, fx.creds.user_key, fx.creds.phrase),
              protocol::ServiceProvider(fx.creds.provider_key), {}, rng);
  net.set_seat_hook([](const Envelope& env) { return std::vector<Forward>{{env, Verdict::Dropped}}; });
  net.start_user();
  net.run();
  net.settle();
  CHECK(net.locker().sessions().empty());
  CHECK(net.trace().delivered_kinds().empty());
  CHECK(net.trace().steps().size() == 1);
}

TEST_CASE("short deadline times out an honest ack") {
  crypto::SeededRandom rng(90);
  auto fx = make_fixture(rng);
  auto r = run_honest_session(fx, rng, protocol::LockerOptions{std::chrono::milliseconds(5)});
  CHECK_FALSE(r.outcome.locker_opened);
  CHECK(r.outcome.failure_reason == FailureReason::Timeout);
}

TEST_CASE("scenario runner agrees with its expectations") {
  for (auto name : {"honest", "replay", "impersonation", "repudiation-user", "repudiation-provider"}) {
    for (const char* variant : {"", "control"}) {
      if (std::string_view(name) == "honest" || std::string_view(name) == "replay")
        if (*variant)
          continue;
      ScenarioConfig cfg;
      cfg.scenario = scenario_from_string(name);
      cfg.seed = 3;
      cfg.variant = variant;
      auto res = run_scenario(cfg);
      CHECK_MESSAGE(res.matches_expected, name << " " << variant);
    }
  }
  for (auto variant : {"prf", "challenge", "ack"}) {
    ScenarioConfig cfg;
    cfg.scenario = ScenarioKind::Tamper;
    cfg.seed = 3;
    cfg.variant = variant;
    CHECK_MESSAGE(run_scenario(cfg).matches_expected, variant);
  }
  CHECK_THROWS_AS(scenario_from_string("nope"), Error);
}

TEST_CASE("scenario config from json") {
  auto c = ScenarioConfig::from_json(
      R"({"scenario":"tamper","seed":9,"variant":"ack","timeout_ms":70,"tamper_bit":5})");
  CHECK(c.scenario == ScenarioKind::Tamper);
  CHECK(c.seed == 9u);
  CHECK(c.variant == "ack");
  CHECK(c.timeout_ms == 70);
  CHECK(c.tamper_bit == 5);
  auto d = ScenarioConfig::from_json(R"({"scenario":"honest"})");
  CHECK_FALSE(d.seed);
  CHECK(d.timeout_ms == 5000);
  CHECK_THROWS_AS(ScenarioConfig::from_json("[1]"), Error);
  CHECK_THROWS_AS(ScenarioConfig::from_json(R"({"scenario":"x"})"), Error);
}

TEST_CASE("outcome json has a fixed field order") {
  crypto::SeededRandom rng(91);
  auto fx = make_fixture(rng);
  auto text = run_honest_session(fx, rng).outcome.to_json();
  CHECK(text.rfind(R"({"locker_opened":true,"locker_state":"Open")", 0) == 0);
}
