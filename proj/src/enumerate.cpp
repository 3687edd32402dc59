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

#include "digilock/enumerate.hpp"

#include "digilock/encoding.hpp"

#include <algorithm>
#include <map>

namespace digilock::sim {

using protocol::LockerModule;
using protocol::MessageKind;
using protocol::ServiceProvider;
using protocol::UserAgent;

namespace {

struct Provenance {
  Endpoint creator = Endpoint::User;
  bool prior_session = false;
  bool modified = false;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Packet {
  Envelope env;
  Provenance prov;

  friend bool operator==(const Packet&, const Packet&) = default;
};

struct Model {
  LockerModule locker;
  UserAgent user;
  ServiceProvider provider;
  std::vector<Packet> in_flight;
  std::vector<Packet> knowledge;
  crypto::SeededRandom rng;
  Timestamp now{0};
  // What the locker's current session accepted.
  std::optional<Provenance> auth;
  bool provider_key_genuine = false;
  std::optional<Provenance> ack;
  bool honest_path = true;
  std::vector<std::string> path;
};

bool replayable(MessageKind k) noexcept {
  return k == MessageKind::AuthRequest || k == MessageKind::Challenge || k == MessageKind::Ack;
}

std::optional<std::size_t> critical_field(MessageKind k) noexcept {
  switch (k) {
  case MessageKind::AuthRequest: return 1;
  case MessageKind::Challenge: return 2;
  case MessageKind::Ack: return 1;
  default: return std::nullopt;
  }
}

void put(Bytes& out, ByteView b) {
  auto f = protocol::encode_fields({b});
  out.insert(out.end(), f.begin(), f.end());
}

void put_u64(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

template <typename T>
void put_opt(Bytes& out, const std::optional<T>& v) {
  out.push_back(v ? 1 : 0);
  if (v)
    put(out, v->view());
}

Bytes packet_key(const Packet& p) {
  Bytes out{static_cast<std::uint8_t>(p.env.from), static_cast<std::uint8_t>(p.env.to),
            static_cast<std::uint8_t>(p.prov.creator), p.prov.prior_session, p.prov.modified};
  put(out, protocol::encode_message(p.env.msg));
  return out;
}

void put_packets(Bytes& out, const std::vector<Packet>& packets) {
  std::vector<Bytes> keys;
  keys.reserve(packets.size());
  for (const auto& p : packets)
    keys.push_back(packet_key(p));
  std::sort(keys.begin(), keys.end());
  put_u64(out, keys.size());
  for (const auto& k : keys)
    put(out, k);
}

void put_prov(Bytes& out, const std::optional<Provenance>& p) {
  out.push_back(p ? 1 : 0);
  if (p) {
    out.push_back(static_cast<std::uint8_t>(p->creator));
    out.push_back(p->prior_session);
    out.push_back(p->modified);
  }
}

// Canonical encoding of everything that affects future behaviour.
Bytes state_key(const Model& m) {
  Bytes out;
  for (const auto& [user, s] : m.locker.sessions()) {
    put(out, user.bytes());
    out.push_back(static_cast<std::uint8_t>(s.state));
    out.push_back(static_cast<std::uint8_t>(s.reason));
    put_opt(out, s.n_a);
    put_opt(out, s.n_r);
    put_u64(out, s.deadline ? static_cast<std::uint64_t>(s.deadline->count()) : ~0ull);
  }
  const auto& us = m.user.session();
  out.push_back(static_cast<std::uint8_t>(us.state));
  out.push_back(static_cast<std::uint8_t>(us.reason));
  put_opt(out, us.n_a);
  put_opt(out, us.n_r);
  put_packets(out, m.in_flight);
  put_packets(out, m.knowledge);
  put_u64(out, m.rng.position());
  put_u64(out, static_cast<std::uint64_t>(m.now.count()));
  put_prov(out, m.auth);
  out.push_back(m.provider_key_genuine);
  put_prov(out, m.ack);
  out.push_back(m.honest_path);
  return out;
}

std::string describe(const Packet& p) {
  std::string s(protocol::to_string(p.env.msg.kind));
  s += " ";
  s += protocol::to_string(p.env.from);
  s += "->";
  s += protocol::to_string(p.env.to);
  if (p.prov.prior_session)
    s += " [prior]";
  if (p.prov.modified)
    s += " [flipped]";
  return s;
}

class Explorer {
public:
  Explorer(EnumerationCase which, const Fixture& fx, const std::vector<Packet>& recording,
           std::uint64_t seed, EnumerationReport& report)
      : which_(which), fx_(fx), recording_(recording), seed_(seed), report_(report) {}

  void run(std::size_t depth) {
    auto user_key = fx_.creds.user_key;
    auto provider_key = fx_.creds.provider_key;
    crypto::SeededRandom alt(seed_ ^ 0x5eed5eed5eed5eedull);
    if (!which_.user_key_genuine)
      user_key = random_key_other_than(user_key, alt);
    if (!which_.provider_key_genuine)
      provider_key = random_key_other_than(provider_key, alt);

    Model m{LockerModule(fx_.registry),
            UserAgent(fx_.creds.user, user_key, fx_.creds.phrase),
            ServiceProvider(provider_key),
            {},
            recording_,
            crypto::SeededRandom(seed_),
            Timestamp{0},
            std::nullopt,
            false,
            std::nullopt,
            true,
            {}};
    if (which_.user_participates) {
      auto out = m.user.start(m.rng);
      add_outputs(m, Endpoint::User, {std::move(out)});
    }
    explore(std::move(m), depth);
  }

private:
  void add_outputs(Model& m, Endpoint from, std::vector<protocol::Outbound> outs) {
    for (auto& o : outs) {
      Packet p{{from, o.to, std::move(o.msg)}, {from, false, false}};
      if (p.env.via_provider() && replayable(p.env.msg.kind) &&
          std::find(m.knowledge.begin(), m.knowledge.end(), p) == m.knowledge.end())
        m.knowledge.push_back(p);
      m.in_flight.push_back(std::move(p));
    }
  }

  void deliver(Model& m, const Packet& p) {
    const auto& user = fx_.creds.user;
    switch (p.env.to) {
    case Endpoint::User:
      add_outputs(m, Endpoint::User, m.user.handle(p.env.msg));
      return;
    case Endpoint::Provider:
      add_outputs(m, Endpoint::Provider, m.provider.handle(p.env.msg));
      return;
    case Endpoint::Locker:
      break;
    }
    auto state_of = [&](const LockerModule& l) {
      const auto* s = l.session(user);
      return s ? s->state : LockerState::Idle;
    };
    auto before = state_of(m.locker);
    auto outs = m.locker.handle(p.env.from, p.env.msg, m.now, m.rng);
    auto after = state_of(m.locker);
    switch (p.env.msg.kind) {
    case MessageKind::AuthRequest:
      if (!outs.empty() && outs.front().msg.kind == MessageKind::ProviderKeyRequest) {
        m.auth = p.prov;
        m.provider_key_genuine = false;
        m.ack.reset();
      } else if (!outs.empty()) {
        m.auth.reset();
      }
      break;
    case MessageKind::ProviderKey:
      if (before == LockerState::UserVerified && after != LockerState::UserVerified)
        m.provider_key_genuine =
            crypto::ct_equal(p.env.msg.fields[1], fx_.creds.provider_key.reveal());
      break;
    case MessageKind::Ack:
      if (before == LockerState::ChallengeSent && after == LockerState::Open)
        m.ack = p.prov;
      break;
    default:
      break;
    }
    add_outputs(m, Endpoint::Locker, std::move(outs));
  }

  TerminalOutcome outcome(const Model& m) const {
    TerminalOutcome t;
    t.which = which_;
    if (const auto* s = m.locker.session(fx_.creds.user)) {
      t.locker_state = s->state;
      t.locker_reason = s->reason;
    }
    t.user_state = m.user.session().state;
    t.locker_opened = t.locker_state == LockerState::Open;
    if (t.locker_opened) {
      // A recorded request from the earlier honest session was built with
      // the genuine key; a current one only if this case's user has it.
      t.genuine_auth = m.auth && m.auth->creator == Endpoint::User && !m.auth->modified &&
                       (m.auth->prior_session || which_.user_key_genuine);
      t.genuine_provider_key = m.provider_key_genuine;
      t.user_ack = m.ack && m.ack->creator == Endpoint::User && !m.ack->prior_session &&
                   !m.ack->modified && which_.user_participates;
    }
    return t;
  }

  void explore(Model m, std::size_t remaining) {
    auto key = state_key(m);
    auto [it, fresh] = visited_.try_emplace(key, remaining);
    if (!fresh) {
      if (it->second >= remaining)
        return;
      it->second = remaining;
    } else {
      ++report_.states_visited;
      auto t = outcome(m);
      if (t.locker_opened) {
        ++report_.open_states;
        if (!which_.user_participates)
          ++report_.adversary_only_open_states;
        if (!t.sound()) {
          ++report_.unsound_open_states;
          if (report_.counterexamples.size() < 8) {
            std::string trace = which_.label() + ":";
            for (const auto& s : m.path)
              trace += " | " + s;
            report_.counterexamples.push_back(trace);
          }
        }
        if (m.honest_path && which_ == EnumerationCase{} && m.path.size() <= report_.depth)
          report_.honest_trace_found = true;
      }
    }

    std::vector<Model> children;
    if (remaining > 0)
      children = successors(m);
    if (children.empty()) {
      report_.outcomes.insert(outcome(m));
      return;
    }
    for (auto& c : children) {
      ++report_.transitions;
      explore(std::move(c), remaining - 1);
    }
  }

  std::vector<Model> successors(const Model& m) {
    std::vector<Model> out;
    for (std::size_t i = 0; i < m.in_flight.size(); ++i) {
      const Packet& p = m.in_flight[i];
      {
        Model c = m;
        Packet taken = c.in_flight[i];
        c.in_flight.erase(c.in_flight.begin() + static_cast<std::ptrdiff_t>(i));
        c.honest_path = m.honest_path && i == 0;
        c.path.push_back("deliver " + describe(taken));
        deliver(c, taken);
        out.push_back(std::move(c));
      }
      if (!p.env.via_provider())
        continue;
      {
        Model c = m;
        c.in_flight.erase(c.in_flight.begin() + static_cast<std::ptrdiff_t>(i));
        c.honest_path = false;
        c.path.push_back("drop " + describe(p));
        out.push_back(std::move(c));
      }
      if (std::count(m.in_flight.begin(), m.in_flight.end(), p) < 2) {
        Model c = m;
        c.in_flight.push_back(p);
        c.honest_path = false;
        c.path.push_back("duplicate " + describe(p));
        out.push_back(std::move(c));
      }
      if (auto field = critical_field(p.env.msg.kind); field && !p.prov.modified) {
        Model c = m;
        auto& q = c.in_flight[i];
        q.env.msg.fields[*field][0] ^= 0x01;
        q.prov.modified = true;
        c.honest_path = false;
        c.path.push_back("flip " + describe(p));
        out.push_back(std::move(c));
      }
    }
    for (const auto& k : m.knowledge) {
      if (std::find(m.in_flight.begin(), m.in_flight.end(), k) != m.in_flight.end())
        continue;
      Model c = m;
      c.in_flight.push_back(k);
      c.honest_path = false;
      c.path.push_back("replay " + describe(k));
      out.push_back(std::move(c));
    }
    std::optional<Timestamp> deadline;
    for (const auto& [user, s] : m.locker.sessions()) {
      if (s.state == LockerState::ChallengeSent && s.deadline)
        deadline = std::max(deadline.value_or(*s.deadline), *s.deadline);
    }
    if (deadline) {
      Model c = m;
      c.now = *deadline + std::chrono::milliseconds{1};
      c.honest_path = false;
      c.path.push_back("tick");
      add_outputs(c, Endpoint::Locker, c.locker.expire(c.now));
      out.push_back(std::move(c));
    }
    return out;
  }

  EnumerationCase which_;
  const Fixture& fx_;
  const std::vector<Packet>& recording_;
  std::uint64_t seed_;
  EnumerationReport& report_;
  std::map<Bytes, std::size_t> visited_;
};

// User<->locker messages of one honest session, as an eavesdropper on the
// provider seat would have recorded them.
std::vector<Packet> record_prior_session(const Fixture& fx, std::uint64_t seed) {
  crypto::SeededRandom rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<Packet> recorded;
  Network net(fx.registry, UserAgent(fx.creds.user, fx.creds.user_key, fx.creds.phrase),
              ServiceProvider(fx.creds.provider_key), {}, rng);
  net.set_seat_hook([&](const Envelope& env) -> std::vector<Forward> {
    if (replayable(env.msg.kind))
      recorded.push_back({env, {env.from, true, false}});
    return {{env, Verdict::Delivered}};
  });
  net.start_user();
  net.run();
  if (!net.locker().session(fx.creds.user) ||
      net.locker().session(fx.creds.user)->state != LockerState::Open)
    throw Error(ErrorCode::InvalidArgument, "recording session did not open");
  return recorded;
}

} // namespace

std::string EnumerationCase::label() const {
  if (!user_participates)
    return std::string("adversary-only/R:") + (provider_key_genuine ? "genuine" : "wrong");
  return std::string("K_i:") + (user_key_genuine ? "genuine" : "wrong") +
         "/R:" + (provider_key_genuine ? "genuine" : "wrong");
}

std::vector<EnumerationCase> standard_cases() {
  return {{true, true, true},  {true, false, true},  {true, true, false},
          {true, false, false}, {false, true, true}, {false, true, false}};
}

EnumerationReport enumerate_small_traces(std::size_t depth, std::uint64_t seed,
                                         const std::vector<EnumerationCase>& cases) {
  if (depth > max_enumeration_depth)
    throw Error(ErrorCode::DepthExceeded, "depth " + std::to_string(depth) + " exceeds " +
                                              std::to_string(max_enumeration_depth));
  crypto::SeededRandom rng(seed);
  auto fx = make_fixture(rng);
  auto recording = record_prior_session(fx, seed);

  EnumerationReport report;
  report.depth = depth;
  for (const auto& c : cases) {
    Explorer explorer(c, fx, recording, seed, report);
    explorer.run(depth);
  }
  return report;
}

} // namespace digilock::sim
