/* Copyright 2026 The DigiLock Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License. */

/* C interface to the DigiLock locker: store provisioning and registration,
 * locker access sessions, the per-user document vault, and the simulated
 * attack scenarios.
 *
 * All functions return a dl_status. On failure, dl_last_error() returns a
 * thread-local description of the most recent error on the calling thread.
 * Handles are opaque; every open or create call has a matching free or close,
 * which accepts NULL. Secret keys are passed as (pointer, length) pairs and
 * are never echoed back through this interface. */

#ifndef DIGILOCK_DIGILOCK_H
#define DIGILOCK_DIGILOCK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DIGILOCK_BUILDING_LIBRARY)
#    define DL_API __declspec(dllexport)
#  else
#    define DL_API __declspec(dllimport)
#  endif
#else
#  define DL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values 0-7 are also the CLI exit codes. */
typedef enum dl_status {
  DL_OK = 0,
  DL_ERR_USAGE = 1,
  DL_ERR_ALREADY_PROVISIONED = 2,
  DL_ERR_DUPLICATE_USER = 3,
  DL_ERR_BAD_USER_KEY = 4,
  DL_ERR_BAD_PROVIDER_KEY = 5,
  DL_ERR_SESSION_NOT_OPEN = 6,
  DL_ERR_UNKNOWN_DOCUMENT = 7,
  DL_ERR_UNKNOWN_USER = 8,
  DL_ERR_NOT_PROVISIONED = 9,
  /* Locker stayed shut for another reason: phrase mismatch, timeout,
   * sealed-record failure. */
  DL_ERR_ACCESS_DENIED = 10,
  /* A simulated scenario did not end with its expected verdict. */
  DL_ERR_SCENARIO_MISMATCH = 11,
  DL_ERR_IO = 12,
  DL_ERR_CORRUPT_STORE = 13,
  DL_ERR_INTERNAL = 14
} dl_status;

typedef struct dl_store dl_store;
typedef struct dl_session dl_session;
typedef struct dl_buffer dl_buffer;
typedef struct dl_outcome dl_outcome;

DL_API const char* dl_status_name(dl_status status);
DL_API const char* dl_last_error(void);
DL_API const char* dl_version(void);

/* Byte buffers returned by the library. */
DL_API const uint8_t* dl_buffer_data(const dl_buffer* buf);
DL_API size_t dl_buffer_size(const dl_buffer* buf);
DL_API void dl_buffer_free(dl_buffer* buf);

/* Lowercase hex SHA-256 of `data`; `out_hex` receives 64 chars plus NUL. */
DL_API dl_status dl_sha256_hex(const uint8_t* data, size_t len, char out_hex[65]);

/* Opens (creating if needed) a store rooted at directory `dir`: the
 * registry lives in dir/registry.json, documents under dir/vault/. The
 * parent of `dir` must exist. */
DL_API dl_status dl_store_open(const char* dir, dl_store** out);
DL_API void dl_store_close(dl_store* store);

/* Records h(R). `out_h_r_hex` (nullable) receives the hex digest. */
DL_API dl_status dl_provision(dl_store* store, const uint8_t* provider_key, size_t provider_key_len,
                              char out_h_r_hex[65]);

DL_API dl_status dl_register(dl_store* store, const char* user_id, const uint8_t* user_key,
                             size_t user_key_len, const uint8_t* phrase, size_t phrase_len);

/* Runs one complete locker access session in-process. On DL_OK `*out`
 * holds an open session usable for vault calls; otherwise `*out` is NULL
 * and the status names the reason. `timeout_ms` of 0 selects the default
 * acknowledgement deadline (5000 ms). */
DL_API dl_status dl_access(dl_store* store, const char* user_id, const uint8_t* user_key,
                           size_t user_key_len, const uint8_t* provider_key, size_t provider_key_len,
                           const uint8_t* phrase, size_t phrase_len, uint64_t timeout_ms,
                           dl_session** out);
DL_API int dl_session_is_open(const dl_session* session);
DL_API void dl_session_close(dl_session* session);

DL_API dl_status dl_vault_put(dl_session* session, const char* name, const uint8_t* data, size_t len);
DL_API dl_status dl_vault_get(dl_session* session, const char* name, dl_buffer** out);
/* Document names, sorted, each terminated by '\n'. */
DL_API dl_status dl_vault_list(dl_session* session, dl_buffer** out);

/* Scenario names: honest, replay, impersonation, repudiation-user,
 * repudiation-provider, tamper. `variant` may be NULL. With has_seed == 0
 * the run draws from the OS CSPRNG. Returns DL_OK when the scenario ran,
 * whatever its verdict; see dl_outcome_matches_expected. */
DL_API dl_status dl_simulate(const char* scenario, const char* variant, int has_seed, uint64_t seed,
                             uint64_t timeout_ms, dl_outcome** out);
/* Same, from a JSON scenario definition
 * {"scenario":..,"seed":..,"variant":..,"timeout_ms":..}. */
DL_API dl_status dl_simulate_json(const char* config_json, dl_outcome** out);
DL_API int dl_outcome_locker_opened(const dl_outcome* outcome);
DL_API int dl_outcome_matches_expected(const dl_outcome* outcome);
/* Short failure code ("BadUserKey", "Timeout", ...) or "None". */
DL_API const char* dl_outcome_failure_reason(const dl_outcome* outcome);
DL_API dl_status dl_outcome_json(const dl_outcome* outcome, dl_buffer** out);
DL_API dl_status dl_outcome_trace_jsonl(const dl_outcome* outcome, dl_buffer** out);
DL_API void dl_outcome_free(dl_outcome* outcome);

#ifdef __cplusplus
}
#endif

#endif /* DIGILOCK_DIGILOCK_H */
