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

#include "digilock/store.hpp"

#include "digilock/encoding.hpp"
#include "json_codec.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>

#include <unistd.h>

namespace digilock::store {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view vault_label = "vault";
constexpr std::string_view entry_suffix = ".json";

void check_name(const std::string& name) {
  if (name.empty() || name.size() > VaultEntry::max_name_size || !protocol::is_valid_utf8(name))
    throw Error(ErrorCode::InvalidArgument, "document name must be 1-128 bytes of UTF-8");
}

} // namespace

StorePaths StorePaths::in_directory(const fs::path& dir) {
  return {dir / "registry.json", dir / "vault"};
}

crypto::Digest vault_key(const crypto::Digest& locker_key) {
  return protocol::concat_hash({locker_key.view(), as_bytes(vault_label)});
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  std::error_code ec;
  if (path.has_parent_path())
    fs::create_directories(path.parent_path(), ec);
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out)
      throw Error(ErrorCode::IoError, "short write to " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::IoError, "cannot rename into " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string vault_entry_to_json(const UserId& user, const VaultEntry& entry) {
  json doc = {{"version", 1},
              {"user", user.str()},
              {"name", entry.name},
              {"sealed", detail::ciphertext_to_json(entry.sealed_doc)}};
  return doc.dump();
}

VaultEntry vault_entry_from_json(std::string_view text) {
  try {
    auto doc = json::parse(text);
    if (doc.at("version").get<int>() != 1)
      throw Error(ErrorCode::CorruptStore, "unsupported vault entry version");
    return {doc.at("name").get<std::string>(), detail::ciphertext_from_json(doc.at("sealed"))};
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptStore, e.what());
  }
}

LockerStore::LockerStore(StorePaths paths) : paths_(std::move(paths)) {
  if (fs::exists(paths_.registry_file))
    registry_ = Registry::from_json(read_file(paths_.registry_file));
}

crypto::Digest LockerStore::provision(const crypto::SecretKey& provider_key) {
  std::unique_lock lock(mutex_);
  if (registry_.provisioned() || fs::exists(paths_.registry_file))
    throw Error(ErrorCode::AlreadyProvisioned, paths_.registry_file.string());
  Registry fresh;
  fresh.provision(provider_key);
  registry_ = std::move(fresh);
  save_locked();
  return registry_.h_r();
}

bool LockerStore::provisioned() const {
  std::shared_lock lock(mutex_);
  return registry_.provisioned();
}

std::shared_ptr<const Registry> LockerStore::registry() const {
  std::shared_lock lock(mutex_);
  return std::make_shared<const Registry>(registry_);
}

void LockerStore::put_record(LockerRecord record) {
  std::unique_lock lock(mutex_);
  registry_.h_r();
  registry_.put_record(std::move(record));
  save_locked();
}

LockerRecord LockerStore::register_user(const UserId& user, const crypto::SecretKey& user_key,
                                               const protocol::SecretPhrase& phrase,
                                               crypto::RandomSource& rng) {
  std::unique_lock lock(mutex_);
  auto rec = store::register_user(registry_, user, user_key, phrase, rng);
  save_locked();
  return rec;
}

LockerRecord LockerStore::get_record(const UserId& user) const {
  std::shared_lock lock(mutex_);
  return registry_.get_record(user);
}

void LockerStore::save() const {
  std::unique_lock lock(mutex_);
  save_locked();
}

void LockerStore::save_locked() const { write_file_atomic(paths_.registry_file, registry_.to_json()); }

void LockerStore::reload() {
  std::unique_lock lock(mutex_);
  registry_ = fs::exists(paths_.registry_file) ? Registry::from_json(read_file(paths_.registry_file))
                                               : Registry{};
}

void LockerStore::check_grant(const protocol::OpenGrant& grant) const {
  if (!registry_.find(grant.user()))
    throw Error(ErrorCode::SessionNotOpen, "grant names an unregistered user");
}

fs::path LockerStore::user_vault_dir(const UserId& user) const {
  return paths_.vault_dir / crypto::to_hex(user.bytes());
}

fs::path LockerStore::entry_path(const UserId& user, const std::string& name) const {
  return user_vault_dir(user) / (crypto::to_hex(as_bytes(name)) + std::string(entry_suffix));
}

void LockerStore::vault_put(const protocol::OpenGrant& grant, const std::string& name, ByteView doc,
                            crypto::RandomSource& rng) {
  check_name(name);
  std::unique_lock lock(mutex_);
  check_grant(grant);
  VaultEntry entry{name, crypto::seal(vault_key(grant.locker_key()), doc, rng)};
  write_file_atomic(entry_path(grant.user(), name), vault_entry_to_json(grant.user(), entry));
}

Bytes LockerStore::vault_get(const protocol::OpenGrant& grant, const std::string& name) const {
  check_name(name);
  std::shared_lock lock(mutex_);
  check_grant(grant);
  auto path = entry_path(grant.user(), name);
  if (!fs::exists(path))
    throw Error(ErrorCode::UnknownDocument, name);
  auto entry = vault_entry_from_json(read_file(path));
  return crypto::open(vault_key(grant.locker_key()), entry.sealed_doc);
}

std::vector<std::string> LockerStore::vault_list(const protocol::OpenGrant& grant) const {
  std::shared_lock lock(mutex_);
  check_grant(grant);
  std::vector<std::string> names;
  auto dir = user_vault_dir(grant.user());
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    return names;
  for (const auto& item : fs::directory_iterator(dir)) {
    auto file = item.path().filename().string();
    if (!item.is_regular_file() || !file.ends_with(entry_suffix))
      continue;
    auto stem = file.substr(0, file.size() - entry_suffix.size());
    try {
      auto raw = crypto::from_hex(stem);
      names.emplace_back(raw.begin(), raw.end());
    } catch (const Error&) {
      // not one of ours
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

} // namespace digilock::store
