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

// Cryptographic primitives used by every actor: SHA-256, HMAC-SHA-256 as the
// PRF, AES-256-GCM for sealing, and nonce generation. Everything here is pure
// or draws randomness from an explicit RandomSource, so it is safe to call
// concurrently.

#include "digilock/error.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace digilock {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) noexcept {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

namespace crypto {

// Constant-time byte comparison. Unequal lengths compare false immediately;
// for equal lengths the running time does not depend on where a difference is.
bool ct_equal(ByteView a, ByteView b) noexcept;

// Fixed-width byte string with a distinct type per role.
template <std::size_t N, typename Tag>
class FixedBytes {
public:
  static constexpr std::size_t size_bytes = N;

  constexpr FixedBytes() noexcept = default;
  explicit constexpr FixedBytes(const std::array<std::uint8_t, N>& b) noexcept : bytes_(b) {}

  static FixedBytes from(ByteView b) {
    if (b.size() != N)
      throw Error(ErrorCode::InvalidArgument,
                  "expected " + std::to_string(N) + " bytes, got " + std::to_string(b.size()));
    FixedBytes out;
    std::copy(b.begin(), b.end(), out.bytes_.begin());
    return out;
  }

  constexpr std::size_t size() const noexcept { return N; }
  const std::uint8_t* data() const noexcept { return bytes_.data(); }
  std::uint8_t* data() noexcept { return bytes_.data(); }
  ByteView view() const noexcept { return {bytes_.data(), N}; }
  Bytes to_vector() const { return Bytes(bytes_.begin(), bytes_.end()); }
  std::uint8_t& operator[](std::size_t i) noexcept { return bytes_[i]; }
  std::uint8_t operator[](std::size_t i) const noexcept { return bytes_[i]; }
  const std::array<std::uint8_t, N>& array() const noexcept { return bytes_; }

  friend bool operator==(const FixedBytes& a, const FixedBytes& b) noexcept {
    return ct_equal(a.view(), b.view());
  }

  // Lexicographic order for use as a map key; not constant-time.
  friend bool operator<(const FixedBytes& a, const FixedBytes& b) noexcept {
    return a.bytes_ < b.bytes_;
  }

private:
  std::array<std::uint8_t, N> bytes_{};
};

struct DigestTag {};
struct NonceTag {};

using Digest = FixedBytes<32, DigestTag>;
using Nonce = FixedBytes<16, NonceTag>;

// A user key K_i or the provider master key R. 1–64 bytes. There is no
// stream operator and no implicit conversion; `reveal()` is the only way to
// the bytes. The buffer is wiped on destruction.
class SecretKey {
public:
  static constexpr std::size_t min_size = 1;
  static constexpr std::size_t max_size = 64;

  explicit SecretKey(ByteView bytes);
  SecretKey(const SecretKey&) = default;
  SecretKey(SecretKey&&) noexcept = default;
  SecretKey& operator=(const SecretKey&) = default;
  SecretKey& operator=(SecretKey&&) noexcept = default;
  ~SecretKey();

  ByteView reveal() const noexcept { return bytes_; }
  std::size_t size() const noexcept { return bytes_.size(); }

  friend bool operator==(const SecretKey& a, const SecretKey& b) noexcept {
    return ct_equal(a.bytes_, b.bytes_);
  }

private:
  Bytes bytes_;
};

// AEAD output. `open` with any key other than the sealing key fails.
struct Ciphertext {
  static constexpr std::size_t nonce_size = 12;
  static constexpr std::size_t tag_size = 16;

  std::array<std::uint8_t, nonce_size> nonce{};
  Bytes body;
  std::array<std::uint8_t, tag_size> tag{};

  friend bool operator==(const Ciphertext&, const Ciphertext&) = default;
};

class RandomSource {
public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;
};

// Operating-system CSPRNG. Throws EntropyUnavailable if the platform RNG fails.
class SystemRandom final : public RandomSource {
public:
  void fill(std::span<std::uint8_t> out) override;
};

// Deterministic stream for reproducible simulations: SHA-256(seed || counter)
// blocks. Copyable; a copy continues the same stream independently.
class SeededRandom final : public RandomSource {
public:
  explicit SeededRandom(std::uint64_t seed) noexcept : seed_(seed) {}
  void fill(std::span<std::uint8_t> out) override;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t position() const noexcept { return produced_; }

  friend bool operator==(const SeededRandom&, const SeededRandom&) = default;

private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  std::uint64_t produced_ = 0;
  std::array<std::uint8_t, 32> block_{};
  std::size_t used_ = 32;
};

SystemRandom& system_random() noexcept;

Digest hash(ByteView data);
Digest hmac_sha256(ByteView key, ByteView data);
Digest prf(const Digest& key, ByteView input);
Digest xor_digests(const Digest& a, const Digest& b) noexcept;

Ciphertext seal(const Digest& key, ByteView plaintext, RandomSource& rng);
// Throws Error(AuthFailure) on a wrong key or any modification.
Bytes open(const Digest& key, const Ciphertext& ct);

Nonce fresh_nonce(RandomSource& rng);
Nonce fresh_nonce();

std::string to_hex(ByteView b);
Bytes from_hex(std::string_view hex);
std::string to_base64(ByteView b);
Bytes from_base64(std::string_view b64);

// Overwrites the buffer in a way the optimizer will not elide.
void secure_wipe(std::span<std::uint8_t> b) noexcept;

} // namespace crypto
} // namespace digilock
