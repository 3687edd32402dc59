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

#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <random>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::uint8_t* u8(const char* s) { return reinterpret_cast<const std::uint8_t*>(s); }

struct StoreDir {
  fs::path path;
  StoreDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("digilock-capi-" + std::to_string(rd()) + std::to_string(rd()));
  }
  ~StoreDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

constexpr const char* k_user = "user key bytes";
constexpr const char* k_r = "provider key bytes";
constexpr const char* k_m = "my phrase";

dl_store* provisioned(const StoreDir& d) {
  dl_store* st = nullptr;
  REQUIRE(dl_store_open(d.path.c_str(), &st) == DL_OK);
  REQUIRE(dl_provision(st, u8(k_r), std::strlen(k_r), nullptr) == DL_OK);
  REQUIRE(dl_register(st, "alice", u8(k_user), std::strlen(k_user), u8(k_m), std::strlen(k_m)) == DL_OK);
  return st;
}

dl_status access(dl_store* st, const char* user, const char* k, const char* r, dl_session** out) {
  return dl_access(st, user, u8(k), std::strlen(k), u8(r), std::strlen(r), u8(k_m), std::strlen(k_m), 0,
                   out);
}

} // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(dl_status_name(DL_OK)) == "OK");
  CHECK(std::string(dl_status_name(DL_ERR_BAD_USER_KEY)) == "BadUserKey");
  CHECK(std::strlen(dl_version()) > 0);
}

TEST_CASE("sha256 hex through the C API") {
  char hex[65];
  REQUIRE(dl_sha256_hex(u8("abc"), 3, hex) == DL_OK);
  CHECK(std::string(hex) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("null arguments are usage errors") {
  dl_store* st = nullptr;
  CHECK(dl_store_open(nullptr, &st) == DL_ERR_USAGE);
  CHECK(dl_store_open("x", nullptr) == DL_ERR_USAGE);
  CHECK(std::strlen(dl_last_error()) > 0);
  dl_store_close(nullptr);
  dl_session_close(nullptr);
  dl_buffer_free(nullptr);
  dl_outcome_free(nullptr);
}

TEST_CASE("provision, register and access") {
  StoreDir d;
  dl_store* st = nullptr;
  REQUIRE(dl_store_open(d.path.c_str(), &st) == DL_OK);
  char hex[65];
  CHECK(dl_register(st, "alice", u8(k_user), 3, u8(k_m), 3) == DL_ERR_NOT_PROVISIONED);
  REQUIRE(dl_provision(st, u8(k_r), std::strlen(k_r), hex) == DL_OK);
  char want[65];
  dl_sha256_hex(u8(k_r), std::strlen(k_r), want);
  CHECK(std::string(hex) == want);
  CHECK(dl_provision(st, u8(k_r), std::strlen(k_r), nullptr) == DL_ERR_ALREADY_PROVISIONED);
  CHECK(dl_register(st, "alice", u8(k_user), std::strlen(k_user), u8(k_m), std::strlen(k_m)) == DL_OK);
  CHECK(dl_register(st, "alice", u8(k_user), std::strlen(k_user), u8(k_m), std::strlen(k_m)) ==
        DL_ERR_DUPLICATE_USER);
  CHECK(dl_register(st, "", u8(k_user), 1, u8(k_m), 1) == DL_ERR_USAGE);

  dl_session* s = nullptr;
  CHECK(access(st, "alice", "wrong key", k_r, &s) == DL_ERR_BAD_USER_KEY);
  CHECK(s == nullptr);
  CHECK(access(st, "alice", k_user, "wrong R", &s) == DL_ERR_BAD_PROVIDER_KEY);
  CHECK(access(st, "bob", k_user, k_r, &s) == DL_ERR_UNKNOWN_USER);
  s = nullptr;
  REQUIRE(access(st, "alice", k_user, k_r, &s) == DL_OK);
  CHECK(dl_session_is_open(s));
  dl_session_close(s);
  dl_store_close(st);
}

TEST_CASE("vault through the C API") {
  StoreDir d;
  dl_store* st = provisioned(d);
  dl_session* s = nullptr;
  REQUIRE(access(st, "alice", k_user, k_r, &s) == DL_OK);
  CHECK(dl_vault_put(s, "a.txt", u8("hello"), 5) == DL_OK);
  CHECK(dl_vault_put(s, "b.txt", u8(""), 0) == DL_OK);
  dl_buffer* buf = nullptr;
  REQUIRE(dl_vault_get(s, "a.txt", &buf) == DL_OK);
  CHECK(std::string(reinterpret_cast<const char*>(dl_buffer_data(buf)), dl_buffer_size(buf)) == "hello");
  dl_buffer_free(buf);
  CHECK(dl_vault_get(s, "missing", &buf) == DL_ERR_UNKNOWN_DOCUMENT);
  REQUIRE(dl_vault_list(s, &buf) == DL_OK);
  CHECK(std::string(reinterpret_cast<const char*>(dl_buffer_data(buf)), dl_buffer_size(buf)) ==
        "a.txt\nb.txt\n");
  dl_buffer_free(buf);
  dl_session_close(s);
  dl_store_close(st);

  // Reopening the store and a fresh session sees the same documents.
  REQUIRE(dl_store_open(d.path.c_str(), &st) == DL_OK);
  REQUIRE(access(st, "alice", k_user, k_r, &s) == DL_OK);
  REQUIRE(dl_vault_get(s, "a.txt", &buf) == DL_OK);
  CHECK(dl_buffer_size(buf) == 5);
  dl_buffer_free(buf);
  dl_session_close(s);
  dl_store_close(st);
}

TEST_CASE("simulate through the C API") {
  dl_outcome* o = nullptr;
  REQUIRE(dl_simulate("honest", nullptr, 1, 4, 0, &o) == DL_OK);
  CHECK(dl_outcome_locker_opened(o));
  CHECK(dl_outcome_matches_expected(o));
  CHECK(std::string(dl_outcome_failure_reason(o)) == "None");
  dl_buffer* trace = nullptr;
  REQUIRE(dl_outcome_trace_jsonl(o, &trace) == DL_OK);
  std::string t(reinterpret_cast<const char*>(dl_buffer_data(trace)), dl_buffer_size(trace));
  dl_buffer_free(trace);
  dl_outcome_free(o);

  REQUIRE(dl_simulate("honest", nullptr, 1, 4, 0, &o) == DL_OK);
  REQUIRE(dl_outcome_trace_jsonl(o, &trace) == DL_OK);
  CHECK(t == std::string(reinterpret_cast<const char*>(dl_buffer_data(trace)), dl_buffer_size(trace)));
  dl_buffer_free(trace);
  dl_outcome_free(o);

  REQUIRE(dl_simulate("repudiation-user", nullptr, 0, 0, 0, &o) == DL_OK);
  CHECK_FALSE(dl_outcome_locker_opened(o));
  CHECK(std::string(dl_outcome_failure_reason(o)) == "BadUserKey");
  dl_buffer* js = nullptr;
  REQUIRE(dl_outcome_json(o, &js) == DL_OK);
  CHECK(dl_buffer_size(js) > 0);
  dl_buffer_free(js);
  dl_outcome_free(o);

  REQUIRE(dl_simulate_json(R"({"scenario":"replay","seed":2})", &o) == DL_OK);
  CHECK(std::string(dl_outcome_failure_reason(o)) == "Timeout");
  dl_outcome_free(o);

  CHECK(dl_simulate("bogus", nullptr, 1, 1, 0, &o) == DL_ERR_USAGE);
  CHECK(dl_simulate_json("{not json", &o) == DL_ERR_USAGE);
}
