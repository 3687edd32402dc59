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

#include "digilock/registry.hpp"

#include "digilock/protocol.hpp"
#include "json_codec.hpp"

#include <nlohmann/json.hpp>

namespace digilock::store {

using nlohmann::json;

void Registry::provision(const crypto::SecretKey& provider_key) {
  if (h_r_)
    throw Error(ErrorCode::AlreadyProvisioned, "registry already holds a provider digest");
  h_r_ = protocol::provider_digest(provider_key);
}

const crypto::Digest& Registry::h_r() const {
  if (!h_r_)
    throw Error(ErrorCode::NotProvisioned, "registry has not been provisioned");
  return *h_r_;
}

void Registry::put_record(LockerRecord record) {
  auto id = record.user_id;
  if (records_.contains(id))
    throw Error(ErrorCode::DuplicateUser, id.str());
  records_.emplace(std::move(id), std::move(record));
}

const LockerRecord& Registry::get_record(const UserId& user) const {
  auto it = records_.find(user);
  if (it == records_.end())
    throw Error(ErrorCode::UnknownUser, user.str());
  return it->second;
}

const LockerRecord* Registry::find(const UserId& user) const noexcept {
  auto it = records_.find(user);
  return it == records_.end() ? nullptr : &it->second;
}

std::string Registry::to_json() const {
  json records = json::object();
  for (const auto& [id, rec] : records_)
    records[id.str()] = {{"d_u", crypto::to_hex(rec.d_u.view())},
                         {"sealed", detail::ciphertext_to_json(rec.sealed)}};
  json doc = {{"version", format_version},
              {"h_r", h_r_ ? json(crypto::to_hex(h_r_->view())) : json(nullptr)},
              {"records", std::move(records)}};
  return doc.dump();
}

Registry Registry::from_json(std::string_view text) {
  Registry reg;
  try {
    auto doc = json::parse(text);
    if (doc.at("version").get<int>() != format_version)
      throw Error(ErrorCode::CorruptStore, "unsupported registry version");
    if (!doc.at("h_r").is_null())
      reg.h_r_ = crypto::Digest::from(crypto::from_hex(doc.at("h_r").get<std::string>()));
    for (const auto& [id, rec] : doc.at("records").items()) {
      UserId user(id);
      auto d_u = crypto::Digest::from(crypto::from_hex(rec.at("d_u").get<std::string>()));
      reg.put_record({user, d_u, detail::ciphertext_from_json(rec.at("sealed"))});
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptStore, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptStore)
      throw;
    throw Error(ErrorCode::CorruptStore, e.what());
  }
  return reg;
}

const LockerRecord& register_user(Registry& registry, const UserId& user,
                                  const crypto::SecretKey& user_key,
                                  const protocol::SecretPhrase& phrase, crypto::RandomSource& rng) {
  if (registry.find(user))
    throw Error(ErrorCode::DuplicateUser, user.str());
  registry.put_record(protocol::make_record(user, user_key, phrase, registry.h_r(), rng));
  return registry.get_record(user);
}

} // namespace digilock::store
