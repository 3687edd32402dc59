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

#include "digilock/crypto.hpp"
#include "digilock/types.hpp"

#include <map>
#include <optional>
#include <string>

namespace digilock::store {

using protocol::LockerRecord;
using protocol::UserId;

// The locker's registry: h(R) plus one record per user. Holds no secret key.
class Registry {
public:
  static constexpr int format_version = 1;

  Registry() = default;

  // Sets h_R = hash(R). R itself is not retained. Throws AlreadyProvisioned.
  void provision(const crypto::SecretKey& provider_key);
  bool provisioned() const noexcept { return h_r_.has_value(); }
  // Throws NotProvisioned.
  const crypto::Digest& h_r() const;

  // Throws DuplicateUser.
  void put_record(LockerRecord record);
  // Throws UnknownUser.
  const LockerRecord& get_record(const UserId& user) const;
  const LockerRecord* find(const UserId& user) const noexcept;
  const std::map<UserId, LockerRecord>& records() const noexcept { return records_; }

  // {"version":1,"h_r":hex,"records":{id:{"d_u":hex,"sealed":{"nonce","body","tag"}}}}
  // Keys are emitted in sorted order with no whitespace, so equal registries
  // serialize to identical bytes.
  std::string to_json() const;
  // Throws CorruptStore.
  static Registry from_json(std::string_view text);

  friend bool operator==(const Registry&, const Registry&) = default;

private:
  std::optional<crypto::Digest> h_r_;
  std::map<UserId, LockerRecord> records_;
};

// Registration inside the locker boundary: seals (m, K_i, U_i) under
// L = h(U_i || K_i) xor h(R) and stores the record. Throws DuplicateUser,
// NotProvisioned.
const LockerRecord& register_user(Registry& registry, const UserId& user,
                                  const crypto::SecretKey& user_key,
                                  const protocol::SecretPhrase& phrase, crypto::RandomSource& rng);

} // namespace digilock::store
