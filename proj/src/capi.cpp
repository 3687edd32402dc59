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

#include "digilock/digilock.h"

#include "digilock/harness.hpp"
#include "digilock/store.hpp"

#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <string>

namespace {

using namespace digilock;

thread_local std::string last_error;

struct Session {
  dl_store* owner;
  protocol::OpenGrant grant;
};

dl_status status_for(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::InvalidArgument:
  case ErrorCode::EncodingError:
  case ErrorCode::TruncatedEncoding:
  case ErrorCode::TrailingBytes:
  case ErrorCode::MalformedMessage:
  case ErrorCode::DepthExceeded:
    return DL_ERR_USAGE;
  case ErrorCode::AlreadyProvisioned: return DL_ERR_ALREADY_PROVISIONED;
  case ErrorCode::DuplicateUser: return DL_ERR_DUPLICATE_USER;
  case ErrorCode::UnknownUser: return DL_ERR_UNKNOWN_USER;
  case ErrorCode::NotProvisioned: return DL_ERR_NOT_PROVISIONED;
  case ErrorCode::SessionNotOpen: return DL_ERR_SESSION_NOT_OPEN;
  case ErrorCode::UnknownDocument: return DL_ERR_UNKNOWN_DOCUMENT;
  case ErrorCode::IoError: return DL_ERR_IO;
  case ErrorCode::AuthFailure:
  case ErrorCode::CorruptStore:
    return DL_ERR_CORRUPT_STORE;
  case ErrorCode::OutOfOrder:
  case ErrorCode::EntropyUnavailable:
    return DL_ERR_INTERNAL;
  }
  return DL_ERR_INTERNAL;
}

dl_status fail(dl_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `fn` and converts any exception to a status.
template <typename Fn>
dl_status guarded(Fn&& fn) noexcept {
  try {
    last_error.clear();
    return fn();
  } catch (const Error& e) {
    return fail(status_for(e.code()), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(DL_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(DL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(DL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DL_ERR_INTERNAL, "unknown exception");
  }
}

ByteView view(const uint8_t* data, size_t len) {
  if (!data && len != 0)
    throw Error(ErrorCode::InvalidArgument, "null buffer with nonzero length");
  return {data, len};
}

std::string required_string(const char* s, const char* what) {
  if (!s)
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " is null");
  return s;
}

template <typename T>
void require_handle(const T* h, const char* what) {
  if (!h)
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " handle is null");
}

void write_hex(char out[65], const crypto::Digest& d) {
  auto hex = crypto::to_hex(d.view());
  std::memcpy(out, hex.c_str(), hex.size() + 1);
}

} // namespace

struct dl_store {
  store::LockerStore store;
};

struct dl_session {
  Session s;
};

struct dl_buffer {
  Bytes bytes;
};

struct dl_outcome {
  sim::ScenarioResult result;
  std::string failure_reason;
};

namespace {

dl_buffer* make_buffer(Bytes b) { return new dl_buffer{std::move(b)}; }

} // namespace

extern "C" {

const char* dl_status_name(dl_status status) {
  switch (status) {
  case DL_OK: return "OK";
  case DL_ERR_USAGE: return "UsageError";
  case DL_ERR_ALREADY_PROVISIONED: return "AlreadyProvisioned";
  case DL_ERR_DUPLICATE_USER: return "DuplicateUser";
  case DL_ERR_BAD_USER_KEY: return "BadUserKey";
  case DL_ERR_BAD_PROVIDER_KEY: return "BadProviderKey";
  case DL_ERR_SESSION_NOT_OPEN: return "SessionNotOpen";
  case DL_ERR_UNKNOWN_DOCUMENT: return "UnknownDocument";
  case DL_ERR_UNKNOWN_USER: return "UnknownUser";
  case DL_ERR_NOT_PROVISIONED: return "NotProvisioned";
  case DL_ERR_ACCESS_DENIED: return "AccessDenied";
  case DL_ERR_SCENARIO_MISMATCH: return "ScenarioMismatch";
  case DL_ERR_IO: return "IoError";
  case DL_ERR_CORRUPT_STORE: return "CorruptStore";
  case DL_ERR_INTERNAL: return "InternalError";
  }
  return "Unknown";
}

const char* dl_last_error(void) { return last_error.c_str(); }

const char* dl_version(void) { return "0.1.0"; }

const uint8_t* dl_buffer_data(const dl_buffer* buf) { return buf ? buf->bytes.data() : nullptr; }
size_t dl_buffer_size(const dl_buffer* buf) { return buf ? buf->bytes.size() : 0; }
void dl_buffer_free(dl_buffer* buf) {
  if (buf)
    crypto::secure_wipe(buf->bytes);
  delete buf;
}

dl_status dl_sha256_hex(const uint8_t* data, size_t len, char out_hex[65]) {
  return guarded([&] {
    if (!out_hex)
      throw Error(ErrorCode::InvalidArgument, "output buffer is null");
    write_hex(out_hex, crypto::hash(view(data, len)));
    return DL_OK;
  });
}

dl_status dl_store_open(const char* dir, dl_store** out) {
  return guarded([&] {
    if (!out)
      throw Error(ErrorCode::InvalidArgument, "out is null");
    *out = nullptr;
    std::filesystem::path root(required_string(dir, "store directory"));
    auto parent = std::filesystem::absolute(root).parent_path();
    if (!std::filesystem::is_directory(parent))
      throw Error(ErrorCode::IoError, "parent directory does not exist: " + parent.string());
    std::filesystem::create_directories(root);
    *out = new dl_store{store::LockerStore(store::StorePaths::in_directory(root))};
    return DL_OK;
  });
}

void dl_store_close(dl_store* store) { delete store; }

dl_status dl_provision(dl_store* st, const uint8_t* provider_key, size_t provider_key_len,
                       char out_h_r_hex[65]) {
  return guarded([&] {
    require_handle(st, "store");
    auto h_r = st->store.provision(crypto::SecretKey(view(provider_key, provider_key_len)));
    if (out_h_r_hex)
      write_hex(out_h_r_hex, h_r);
    return DL_OK;
  });
}

dl_status dl_register(dl_store* st, const char* user_id, const uint8_t* user_key, size_t user_key_len,
                      const uint8_t* phrase, size_t phrase_len) {
  return guarded([&] {
    require_handle(st, "store");
    protocol::UserId user(required_string(user_id, "user id"));
    auto p = view(phrase, phrase_len);
    protocol::SecretPhrase m(std::string(p.begin(), p.end()));
    st->store.register_user(user, crypto::SecretKey(view(user_key, user_key_len)), m,
                            crypto::system_random());
    return DL_OK;
  });
}

dl_status dl_access(dl_store* st, const char* user_id, const uint8_t* user_key, size_t user_key_len,
                    const uint8_t* provider_key, size_t provider_key_len, const uint8_t* phrase,
                    size_t phrase_len, uint64_t timeout_ms, dl_session** out) {
  return guarded([&] {
    require_handle(st, "store");
    if (!out)
      throw Error(ErrorCode::InvalidArgument, "out is null");
    *out = nullptr;
    protocol::UserId user(required_string(user_id, "user id"));
    auto p = view(phrase, phrase_len);
    protocol::SecretPhrase m(std::string(p.begin(), p.end()));
    crypto::SecretKey k_i(view(user_key, user_key_len));
    crypto::SecretKey r(view(provider_key, provider_key_len));

    auto registry = st->store.registry();
    registry->h_r();
    if (!registry->find(user))
      throw Error(ErrorCode::UnknownUser, user.str());

    protocol::LockerOptions options;
    if (timeout_ms != 0)
      options.ack_timeout = std::chrono::milliseconds(timeout_ms);
    sim::Network net(registry, protocol::UserAgent(user, k_i, m), protocol::ServiceProvider(r),
                     options, crypto::system_random());
    net.start_user();
    net.run();
    net.settle();

    const auto* s = net.locker().session(user);
    if (s && s->state == protocol::LockerState::Open) {
      *out = new dl_session{{st, net.locker().grant(user)}};
      return DL_OK;
    }
    auto reason = s ? s->reason : protocol::FailureReason::None;
    std::string why = "locker stayed shut: " + std::string(protocol::to_string(reason));
    if (net.user().session().reason != protocol::FailureReason::None)
      why += " (user side: " + std::string(protocol::to_string(net.user().session().reason)) + ")";
    switch (reason) {
    case protocol::FailureReason::BadUserKey: return fail(DL_ERR_BAD_USER_KEY, why);
    case protocol::FailureReason::BadProviderKey: return fail(DL_ERR_BAD_PROVIDER_KEY, why);
    default: return fail(DL_ERR_ACCESS_DENIED, why);
    }
  });
}

int dl_session_is_open(const dl_session* session) { return session ? 1 : 0; }

void dl_session_close(dl_session* session) { delete session; }

dl_status dl_vault_put(dl_session* session, const char* name, const uint8_t* data, size_t len) {
  return guarded([&] {
    if (!session)
      throw Error(ErrorCode::SessionNotOpen, "no open session");
    session->s.owner->store.vault_put(session->s.grant, required_string(name, "document name"),
                                      view(data, len), crypto::system_random());
    return DL_OK;
  });
}

dl_status dl_vault_get(dl_session* session, const char* name, dl_buffer** out) {
  return guarded([&] {
    if (!session)
      throw Error(ErrorCode::SessionNotOpen, "no open session");
    if (!out)
      throw Error(ErrorCode::InvalidArgument, "out is null");
    *out = nullptr;
    auto doc = session->s.owner->store.vault_get(session->s.grant, required_string(name, "document name"));
    *out = make_buffer(std::move(doc));
    return DL_OK;
  });
}

dl_status dl_vault_list(dl_session* session, dl_buffer** out) {
  return guarded([&] {
    if (!session)
      throw Error(ErrorCode::SessionNotOpen, "no open session");
    if (!out)
      throw Error(ErrorCode::InvalidArgument, "out is null");
    *out = nullptr;
    Bytes joined;
    for (const auto& n : session->s.owner->store.vault_list(session->s.grant)) {
      joined.insert(joined.end(), n.begin(), n.end());
      joined.push_back('\n');
    }
    *out = make_buffer(std::move(joined));
    return DL_OK;
  });
}

namespace {

dl_status finish_simulation(const sim::ScenarioConfig& cfg, dl_outcome** out) {
  auto result = sim::run_scenario(cfg);
  auto reason = result.run.outcome.failure_reason;
  *out = new dl_outcome{std::move(result),
                        reason ? std::string(protocol::to_string(*reason)) : std::string("None")};
  return DL_OK;
}

} // namespace

dl_status dl_simulate(const char* scenario, const char* variant, int has_seed, uint64_t seed,
                      uint64_t timeout_ms, dl_outcome** out) {
  return guarded([&] {
    if (!out)
      throw Error(ErrorCode::InvalidArgument, "out is null");
    *out = nullptr;
    sim::ScenarioConfig cfg;
    cfg.scenario = sim::scenario_from_string(required_string(scenario, "scenario"));
    if (variant)
      cfg.variant = variant;
    if (has_seed)
      cfg.seed = seed;
    if (timeout_ms != 0)
      cfg.timeout_ms = timeout_ms;
    return finish_simulation(cfg, out);
  });
}

dl_status dl_simulate_json(const char* config_json, dl_outcome** out) {
  return guarded([&] {
    if (!out)
      throw Error(ErrorCode::InvalidArgument, "out is null");
    *out = nullptr;
    return finish_simulation(sim::ScenarioConfig::from_json(required_string(config_json, "config")), out);
  });
}

int dl_outcome_locker_opened(const dl_outcome* outcome) {
  return outcome && outcome->result.run.outcome.locker_opened ? 1 : 0;
}

int dl_outcome_matches_expected(const dl_outcome* outcome) {
  return outcome && outcome->result.matches_expected ? 1 : 0;
}

const char* dl_outcome_failure_reason(const dl_outcome* outcome) {
  return outcome ? outcome->failure_reason.c_str() : "None";
}

dl_status dl_outcome_json(const dl_outcome* outcome, dl_buffer** out) {
  return guarded([&] {
    require_handle(outcome, "outcome");
    if (!out)
      throw Error(ErrorCode::InvalidArgument, "out is null");
    *out = make_buffer(to_bytes(outcome->result.run.outcome.to_json()));
    return DL_OK;
  });
}

dl_status dl_outcome_trace_jsonl(const dl_outcome* outcome, dl_buffer** out) {
  return guarded([&] {
    require_handle(outcome, "outcome");
    if (!out)
      throw Error(ErrorCode::InvalidArgument, "out is null");
    *out = make_buffer(to_bytes(outcome->result.run.trace.to_jsonl()));
    return DL_OK;
  });
}

void dl_outcome_free(dl_outcome* outcome) { delete outcome; }

} // extern "C"
