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

// File-backed locker store: registry.json plus a vault directory of sealed
// documents. Only the locker side holds a LockerStore; vault operations
// require an OpenGrant minted by an Open locker session.

#include "digilock/actors.hpp"
#include "digilock/registry.hpp"

#include <filesystem>
#include <shared_mutex>
#include <string>
#include <vector>

namespace digilock::store {

struct StorePaths {
  std::filesystem::path registry_file;
  std::filesystem::path vault_dir;

  // <dir>/registry.json and <dir>/vault/
  static StorePaths in_directory(const std::filesystem::path& dir);
};

struct VaultEntry {
  static constexpr std::size_t max_name_size = 128;

  std::string name;
  crypto::Ciphertext sealed_doc;

  friend bool operator==(const VaultEntry&, const VaultEntry&) = default;
};

// Storage key for a user's documents: h(L || "vault").
crypto::Digest vault_key(const crypto::Digest& locker_key);

// Writes to a sibling temp file then renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

class LockerStore {
public:
  // Loads an existing registry if the file is present.
  explicit LockerStore(StorePaths paths);

  const StorePaths& paths() const noexcept { return paths_; }

  // Creates the registry with h(R). Throws AlreadyProvisioned if a registry
  // file already exists.
  crypto::Digest provision(const crypto::SecretKey& provider_key);
  bool provisioned() const;

  // Snapshot for handing to a LockerModule.
  std::shared_ptr<const Registry> registry() const;

  // Each persists immediately. Throw DuplicateUser / NotProvisioned.
  void put_record(LockerRecord record);
  LockerRecord register_user(const UserId& user, const crypto::SecretKey& user_key,
                                    const protocol::SecretPhrase& phrase, crypto::RandomSource& rng);
  // Throws UnknownUser.
  LockerRecord get_record(const UserId& user) const;

  // Replaces an existing document of the same name.
  void vault_put(const protocol::OpenGrant& grant, const std::string& name, ByteView doc,
                 crypto::RandomSource& rng);
  // Throws UnknownDocument.
  Bytes vault_get(const protocol::OpenGrant& grant, const std::string& name) const;
  // Sorted names only.
  std::vector<std::string> vault_list(const protocol::OpenGrant& grant) const;

  void save() const;
  void reload();

private:
  std::filesystem::path user_vault_dir(const UserId& user) const;
  std::filesystem::path entry_path(const UserId& user, const std::string& name) const;
  void save_locked() const;
  void check_grant(const protocol::OpenGrant& grant) const;

  StorePaths paths_;
  Registry registry_;
  mutable std::shared_mutex mutex_;
};

std::string vault_entry_to_json(const UserId& user, const VaultEntry& entry);
VaultEntry vault_entry_from_json(std::string_view text);

} // namespace digilock::store
