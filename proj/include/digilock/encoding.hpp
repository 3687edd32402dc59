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

// Length-prefixed field lists: each field is a 4-byte big-endian length
// followed by its bytes. Used for sealed plaintexts, for the canonical
// concatenation fed to hash(a || b || ...), and inside wire messages.

#include "digilock/crypto.hpp"

#include <initializer_list>
#include <vector>

namespace digilock::protocol {

Bytes encode_fields(std::span<const Bytes> fields);
Bytes encode_fields(std::initializer_list<ByteView> fields);

// Throws TruncatedEncoding or TrailingBytes.
std::vector<Bytes> decode_fields(ByteView encoded);

// hash(encode_fields(fields)): the unambiguous form of h(a || b || ...).
crypto::Digest concat_hash(std::initializer_list<ByteView> fields);

} // namespace digilock::protocol
