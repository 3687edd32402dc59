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

// Exhaustive bounded exploration of the protocol against an adversary on
// the provider seat that may reorder, drop, duplicate, bit-flip and replay
// user<->locker messages, including a recording of an earlier honest
// session. Provider<->locker messages may be reordered but not touched.

#include "digilock/harness.hpp"

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace digilock::sim {

inline constexpr std::size_t default_enumeration_depth = 6;
inline constexpr std::size_t max_enumeration_depth = 10;

// Which of the three parties take part genuinely.
struct EnumerationCase {
  bool user_participates = true;
  bool user_key_genuine = true;
  bool provider_key_genuine = true;

  std::string label() const;
  friend auto operator<=>(const EnumerationCase&, const EnumerationCase&) = default;
};

// The six cases: with the user, every combination of genuine/wrong K_i and
// R; without the user (adversary-only), genuine and wrong R.
std::vector<EnumerationCase> standard_cases();

struct TerminalOutcome {
  EnumerationCase which;
  LockerState locker_state = LockerState::Idle;
  FailureReason locker_reason = FailureReason::None;
  UserState user_state = UserState::Idle;
  bool locker_opened = false;
  // Provenance of what the locker accepted in the session that opened.
  bool genuine_auth = false;
  bool genuine_provider_key = false;
  bool user_ack = false;

  bool sound() const noexcept {
    return !locker_opened || (genuine_auth && genuine_provider_key && user_ack);
  }
  friend auto operator<=>(const TerminalOutcome&, const TerminalOutcome&) = default;
};

struct EnumerationReport {
  std::size_t depth = 0;
  std::size_t states_visited = 0;
  std::size_t transitions = 0;
  std::set<TerminalOutcome> outcomes;
  // Open states reached (any depth), and those lacking a genuine K_i, R or ack.
  std::size_t open_states = 0;
  std::size_t unsound_open_states = 0;
  std::size_t adversary_only_open_states = 0;
  // The all-genuine case reached Open by plain in-order delivery.
  bool honest_trace_found = false;
  std::vector<std::string> counterexamples;
};

// Throws DepthExceeded when depth > max_enumeration_depth.
EnumerationReport enumerate_small_traces(std::size_t depth = default_enumeration_depth,
                                         std::uint64_t seed = 1,
                                         const std::vector<EnumerationCase>& cases = standard_cases());

} // namespace digilock::sim
