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

#include "digilock/encoding.hpp"
#include "digilock/protocol.hpp"
#include "digilock/registry.hpp"
#include "oracle/reference_sha256.hpp"

#include <doctest.h>

#include <set>

using namespace digilock;
using namespace digilock::protocol;
using namespace std::chrono_literals;

namespace {

struct Parties {
  UserId user{"alice"};
  crypto::SecretKey k{as_bytes("alice-key-0123456789")};
  SecretPhrase m{"the name of my first bicycle"};
  crypto::SecretKey r{as_bytes("provider-R-secret")};
  crypto::Digest h_r = provider_digest(r);
};

// Independent derivations from the reference hash.
oracle::Digest oracle_d_u(const Parties& p) {
  return oracle::sha256(oracle::concat({p.user.bytes(), p.k.reveal()}));
}

oracle::Digest oracle_l(const Parties& p) {
  auto d = oracle_d_u(p);
  auto hr = oracle::sha256(p.r.reveal());
  oracle::Digest l{};
  for (int i = 0; i < 32; ++i)
    l[i] = d[i] ^ hr[i];
  return l;
}

struct Run {
  LockerRecord record;
  UserSession user;
  LockerSession locker;
  Message challenge;
};

Run run_to_challenge(const Parties& p, crypto::RandomSource& rng, Timestamp now = 0ms) {
  auto rec = make_record(p.user, p.k, p.m, p.h_r, rng);
  auto start = user_begin_session(p.user, p.k, rng);
  auto ls = locker_verify_auth(rec, start.request);
  ls = locker_verify_provider(p.h_r, p.r, std::move(ls));
  auto step = locker_build_challenge(rec, p.r, std::move(ls), now, default_ack_timeout, rng);
  REQUIRE(step.challenge);
  return {rec, start.state, step.state, *step.challenge};
}

} // namespace

TEST_CASE("derived keys match the reference derivation") {
  Parties p;
  CHECK(user_digest(p.user, p.k).array() == oracle_d_u(p));
  CHECK(p.h_r.array() == oracle::sha256(p.r.reveal()));
  CHECK(locker_key(user_digest(p.user, p.k), p.h_r).array() == oracle_l(p));
  crypto::SeededRandom rng(41);
  auto n_a = crypto::fresh_nonce(rng), n_r = crypto::fresh_nonce(rng);
  CHECK(session_key(p.user, p.k, n_a).array() ==
        oracle::sha256(oracle::concat({p.user.bytes(), p.k.reveal(), n_a.view()})));
  CHECK(ack_digest(n_a, n_r).array() == oracle::sha256(oracle::concat({n_a.view(), n_r.view()})));
}

TEST_CASE("registration blob opens under the independently derived L") {
  Parties p;
  crypto::SeededRandom rng(42);
  auto rec = make_record(p.user, p.k, p.m, p.h_r, rng);
  CHECK(rec.d_u.array() == oracle_d_u(p));
  auto plain = crypto::open(crypto::Digest(oracle_l(p)), rec.sealed);
  CHECK(plain == oracle::concat({p.m.bytes(), p.k.reveal(), p.user.bytes()}));
}

TEST_CASE("auth request carries the keyed proof over N_a") {
  Parties p;
  crypto::SeededRandom rng(43);
  auto start = user_begin_session(p.user, p.k, rng);
  auto v = read_auth_request(start.request);
  CHECK(v.proof.array() == oracle::hmac_sha256(oracle_d_u(p), v.n_a.view()));
  CHECK(start.state.state == UserState::AwaitingChallenge);
}

TEST_CASE("honest step sequence opens the locker") {
  Parties p;
  crypto::SeededRandom rng(44);
  auto run = run_to_challenge(p, rng, 100ms);
  CHECK(run.locker.state == LockerState::ChallengeSent);
  CHECK(*run.locker.deadline == 5100ms);
  CHECK(run.locker.locker_key->array() == oracle_l(p));

  // The challenge is the phrase and N_r sealed under K_s.
  auto ks = oracle::sha256(oracle::concat({p.user.bytes(), p.k.reveal(), run.user.n_a->view()}));
  auto body = crypto::open(crypto::Digest(ks), read_challenge(run.challenge));
  CHECK(body == oracle::concat({p.m.bytes(), run.locker.n_r->view()}));

  auto us = user_process_challenge(run.user, p.user, p.k, p.m, run.challenge);
  REQUIRE(us.ack);
  CHECK(us.state.state == UserState::AckSent);
  CHECK(us.state.n_r == run.locker.n_r);
  auto opened = locker_verify_ack(run.locker, *us.ack, 200ms);
  CHECK(opened.state == LockerState::Open);
  CHECK(opened.reason == FailureReason::None);
  auto done = user_process_outcome(us.state, make_result(p.user, result_open));
  CHECK(done.state == UserState::Opened);
}

TEST_CASE("wrong user key fails at the proof check") {
  Parties p;
  crypto::SeededRandom rng(45);
  auto rec = make_record(p.user, p.k, p.m, p.h_r, rng);
  auto start = user_begin_session(p.user, crypto::SecretKey(as_bytes("guess")), rng);
  auto ls = locker_verify_auth(rec, start.request);
  CHECK(ls.state == LockerState::Failed);
  CHECK(ls.reason == FailureReason::BadUserKey);
}

TEST_CASE("wrong provider key fails at the h(R) check") {
  Parties p;
  crypto::SeededRandom rng(46);
  auto rec = make_record(p.user, p.k, p.m, p.h_r, rng);
  auto ls = locker_verify_auth(rec, user_begin_session(p.user, p.k, rng).request);
  ls = locker_verify_provider(p.h_r, crypto::SecretKey(as_bytes("not R")), std::move(ls));
  CHECK(ls.state == LockerState::Failed);
  CHECK(ls.reason == FailureReason::BadProviderKey);
}

TEST_CASE("steps out of order are rejected") {
  Parties p;
  crypto::SeededRandom rng(47);
  auto rec = make_record(p.user, p.k, p.m, p.h_r, rng);
  LockerSession idle(p.user);
  auto code = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code([&] { locker_verify_provider(p.h_r, p.r, idle); }) == ErrorCode::OutOfOrder);
  CHECK(code([&] { locker_build_challenge(rec, p.r, idle, 0ms, 1s, rng); }) ==
        ErrorCode::OutOfOrder);
  CHECK(code([&] { locker_verify_ack(idle, make_ack(p.user, crypto::Digest{}), 0ms); }) ==
        ErrorCode::OutOfOrder);
  UserSession uidle(p.user);
  auto run = run_to_challenge(p, rng);
  CHECK(code([&] { user_process_challenge(uidle, p.user, p.k, p.m, run.challenge); }) ==
        ErrorCode::OutOfOrder);
}

TEST_CASE("auth request for another user is an argument error") {
  Parties p;
  crypto::SeededRandom rng(48);
  auto rec = make_record(p.user, p.k, p.m, p.h_r, rng);
  auto start = user_begin_session(UserId("mallory"), p.k, rng);
  CHECK_THROWS_AS(locker_verify_auth(rec, start.request), Error);
}

TEST_CASE("blob sealed under a different L fails authentication") {
  // Forces ProviderVerified with a record whose blob was sealed for another
  // provider, which the h(R) check alone would never let through.
  Parties p;
  crypto::SeededRandom rng(49);
  auto other_hr = provider_digest(crypto::SecretKey(as_bytes("other provider")));
  auto rec = make_record(p.user, p.k, p.m, other_hr, rng);
  auto ls = locker_verify_auth(rec, user_begin_session(p.user, p.k, rng).request);
  ls = locker_verify_provider(p.h_r, p.r, std::move(ls));
  REQUIRE(ls.state == LockerState::ProviderVerified);
  auto step = locker_build_challenge(rec, p.r, std::move(ls), 0ms, 1s, rng);
  CHECK_FALSE(step.challenge);
  CHECK(step.state.reason == FailureReason::BlobAuthFailure);
}

TEST_CASE("user detects a wrong phrase or a foreign challenge") {
  Parties p;
  crypto::SeededRandom rng(50);
  auto run = run_to_challenge(p, rng);
  auto us = user_process_challenge(run.user, p.user, p.k, SecretPhrase("something else"),
                                   run.challenge);
  CHECK_FALSE(us.ack);
  CHECK(us.state.reason == FailureReason::PhraseMismatch);

  auto other = run_to_challenge(p, rng);
  auto cross = user_process_challenge(run.user, p.user, p.k, p.m, other.challenge);
  CHECK_FALSE(cross.ack);
  CHECK(cross.state.reason == FailureReason::ChallengeAuthFailure);
}

TEST_CASE("ack over swapped nonces is rejected") {
  Parties p;
  crypto::SeededRandom rng(51);
  auto run = run_to_challenge(p, rng);
  auto swapped = make_ack(p.user, ack_digest(*run.locker.n_r, *run.user.n_a));
  auto ls = locker_verify_ack(run.locker, swapped, 1ms);
  CHECK(ls.state == LockerState::Failed);
  CHECK(ls.reason == FailureReason::BadAck);
}

TEST_CASE("deadline is inclusive and expiry fails the session") {
  Parties p;
  crypto::SeededRandom rng(52);
  auto run = run_to_challenge(p, rng, 0ms);
  auto us = user_process_challenge(run.user, p.user, p.k, p.m, run.challenge);
  REQUIRE(us.ack);
  CHECK(locker_verify_ack(run.locker, *us.ack, 5000ms).state == LockerState::Open);
  auto late = locker_verify_ack(run.locker, *us.ack, 5001ms);
  CHECK(late.reason == FailureReason::Timeout);
  CHECK(locker_expire(run.locker, 5000ms).state == LockerState::ChallengeSent);
  CHECK(locker_expire(run.locker, 5001ms).reason == FailureReason::Timeout);
}

TEST_CASE("locker error moves the user to a failed state") {
  Parties p;
  crypto::SeededRandom rng(53);
  auto start = user_begin_session(p.user, p.k, rng);
  auto s = user_process_outcome(start.state, make_error(p.user, WireReason::BadUserKey));
  CHECK(s.state == UserState::Failed);
  CHECK(s.reason == FailureReason::LockerRejected);
  CHECK(s.locker_reason == WireReason::BadUserKey);
}

TEST_CASE("property: session keys and nonces are fresh across sessions") {
  Parties p;
  crypto::SeededRandom rng(54);
  std::set<crypto::Digest> keys;
  std::set<crypto::Nonce> nonces;
  for (int i = 0; i < 10000; ++i) {
    auto start = user_begin_session(p.user, p.k, rng);
    keys.insert(session_key(p.user, p.k, *start.state.n_a));
    nonces.insert(*start.state.n_a);
  }
  CHECK(keys.size() == 10000);
  CHECK(nonces.size() == 10000);
}

TEST_CASE("property: random wrong keys never get past verification") {
  Parties p;
  crypto::SeededRandom rng(55);
  auto rec = make_record(p.user, p.k, p.m, p.h_r, rng);
  for (int i = 0; i < 200; ++i) {
    Bytes kb(16);
    rng.fill(kb);
    crypto::SecretKey guess(kb);
    auto ls = locker_verify_auth(rec, user_begin_session(p.user, guess, rng).request);
    CHECK(ls.reason == FailureReason::BadUserKey);
    auto good = locker_verify_auth(rec, user_begin_session(p.user, p.k, rng).request);
    CHECK(locker_verify_provider(p.h_r, guess, good).reason == FailureReason::BadProviderKey);
  }
}

TEST_CASE("registry rejects duplicates and unknown users") {
  Parties p;
  crypto::SeededRandom rng(56);
  store::Registry reg;
  CHECK_THROWS_AS(reg.h_r(), Error);
  reg.provision(p.r);
  CHECK(reg.h_r() == p.h_r);
  store::register_user(reg, p.user, p.k, p.m, rng);
  try {
    store::register_user(reg, p.user, p.k, p.m, rng);
    FAIL("duplicate accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DuplicateUser);
  }
  try {
    reg.get_record(UserId("nobody"));
    FAIL("unknown user found");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownUser);
  }
  try {
    reg.provision(p.r);
    FAIL("re-provisioned");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AlreadyProvisioned);
  }
}
