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

#include <nlohmann/json.hpp>

namespace digilock::store::detail {

inline nlohmann::json ciphertext_to_json(const crypto::Ciphertext& ct) {
  return {{"nonce", crypto::to_base64(ct.nonce)},
          {"body", crypto::to_base64(ct.body)},
          {"tag", crypto::to_base64(ct.tag)}};
}

inline crypto::Ciphertext ciphertext_from_json(const nlohmann::json& j) {
  crypto::Ciphertext ct;
  auto nonce = crypto::from_base64(j.at("nonce").get<std::string>());
  auto tag = crypto::from_base64(j.at("tag").get<std::string>());
  if (nonce.size() != ct.nonce.size() || tag.size() != ct.tag.size())
    throw Error(ErrorCode::CorruptStore, "ciphertext nonce or tag has the wrong size");
  std::copy(nonce.begin(), nonce.end(), ct.nonce.begin());
  std::copy(tag.begin(), tag.end(), ct.tag.begin());
  ct.body = crypto::from_base64(j.at("body").get<std::string>());
  return ct;
}

} // namespace digilock::store::detail
