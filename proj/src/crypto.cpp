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

#include "digilock/crypto.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>

#include <cstring>
#include <memory>

namespace digilock::crypto {

namespace {

struct CipherCtxDeleter {
  void operator()(EVP_CIPHER_CTX* ctx) const noexcept { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

CipherCtx new_cipher_ctx() {
  CipherCtx ctx(EVP_CIPHER_CTX_new());
  if (!ctx)
    throw std::bad_alloc();
  return ctx;
}

int checked_len(std::size_t n) {
  if (n > static_cast<std::size_t>(INT32_MAX))
    throw Error(ErrorCode::InvalidArgument, "buffer too large");
  return static_cast<int>(n);
}

void store_le64(std::uint8_t* out, std::uint64_t v) noexcept {
  for (int i = 0; i < 8; ++i)
    out[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

} // namespace

bool ct_equal(ByteView a, ByteView b) noexcept {
  if (a.size() != b.size())
    return false;
  if (a.empty())
    return true;
  return CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

void secure_wipe(std::span<std::uint8_t> b) noexcept {
  if (!b.empty())
    OPENSSL_cleanse(b.data(), b.size());
}

SecretKey::SecretKey(ByteView bytes) : bytes_(bytes.begin(), bytes.end()) {
  if (bytes_.size() < min_size || bytes_.size() > max_size) {
    secure_wipe(bytes_);
    throw Error(ErrorCode::InvalidArgument, "secret key must be 1-64 bytes");
  }
}

SecretKey::~SecretKey() { secure_wipe(bytes_); }

void SystemRandom::fill(std::span<std::uint8_t> out) {
  if (out.empty())
    return;
  if (RAND_bytes(out.data(), checked_len(out.size())) != 1)
    throw Error(ErrorCode::EntropyUnavailable, "RAND_bytes failed");
}

SystemRandom& system_random() noexcept {
  static SystemRandom instance;
  return instance;
}

void SeededRandom::refill() {
  std::uint8_t input[16];
  store_le64(input, seed_);
  store_le64(input + 8, counter_++);
  block_ = hash(ByteView(input, sizeof input)).array();
  used_ = 0;
}

void SeededRandom::fill(std::span<std::uint8_t> out) {
  for (auto& b : out) {
    if (used_ == block_.size())
      refill();
    b = block_[used_++];
  }
  produced_ += out.size();
}

Digest hash(ByteView data) {
  std::array<std::uint8_t, 32> md{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != md.size())
    throw Error(ErrorCode::InvalidArgument, "SHA-256 failed");
  return Digest(md);
}

Digest hmac_sha256(ByteView key, ByteView data) {
  std::array<std::uint8_t, 32> md{};
  unsigned int len = 0;
  // HMAC() rejects a null key pointer even for zero length.
  static const std::uint8_t empty_key = 0;
  const std::uint8_t* key_ptr = key.empty() ? &empty_key : key.data();
  if (HMAC(EVP_sha256(), key_ptr, checked_len(key.size()), data.data(), data.size(), md.data(),
           &len) == nullptr ||
      len != md.size())
    throw Error(ErrorCode::InvalidArgument, "HMAC-SHA-256 failed");
  return Digest(md);
}

Digest prf(const Digest& key, ByteView input) { return hmac_sha256(key.view(), input); }

Digest xor_digests(const Digest& a, const Digest& b) noexcept {
  Digest out;
  for (std::size_t i = 0; i < Digest::size_bytes; ++i)
    out[i] = a[i] ^ b[i];
  return out;
}

Ciphertext seal(const Digest& key, ByteView plaintext, RandomSource& rng) {
  Ciphertext ct;
  rng.fill(ct.nonce);
  ct.body.resize(plaintext.size());

  auto ctx = new_cipher_ctx();
  int len = 0;
  if (EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, Ciphertext::nonce_size, nullptr) != 1 ||
      EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), ct.nonce.data()) != 1)
    throw Error(ErrorCode::InvalidArgument, "AES-256-GCM init failed");
  if (!plaintext.empty() &&
      EVP_EncryptUpdate(ctx.get(), ct.body.data(), &len, plaintext.data(),
                        checked_len(plaintext.size())) != 1)
    throw Error(ErrorCode::InvalidArgument, "AES-256-GCM encrypt failed");
  int final_len = 0;
  if (EVP_EncryptFinal_ex(ctx.get(), ct.body.data() + len, &final_len) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, Ciphertext::tag_size, ct.tag.data()) != 1)
    throw Error(ErrorCode::InvalidArgument, "AES-256-GCM finalize failed");
  return ct;
}

Bytes open(const Digest& key, const Ciphertext& ct) {
  Bytes plain(ct.body.size());
  auto ctx = new_cipher_ctx();
  int len = 0;
  if (EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr) != 1 ||
      EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, Ciphertext::nonce_size, nullptr) != 1 ||
      EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.data(), ct.nonce.data()) != 1)
    throw Error(ErrorCode::InvalidArgument, "AES-256-GCM init failed");
  if (!ct.body.empty() &&
      EVP_DecryptUpdate(ctx.get(), plain.data(), &len, ct.body.data(),
                        checked_len(ct.body.size())) != 1) {
    secure_wipe(plain);
    throw Error(ErrorCode::AuthFailure, "decryption failed");
  }
  auto tag = ct.tag;
  int final_len = 0;
  if (EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, Ciphertext::tag_size, tag.data()) != 1 ||
      EVP_DecryptFinal_ex(ctx.get(), plain.data() + len, &final_len) != 1) {
    secure_wipe(plain);
    throw Error(ErrorCode::AuthFailure, "authentication tag mismatch");
  }
  return plain;
}

Nonce fresh_nonce(RandomSource& rng) {
  Nonce n;
  rng.fill(std::span<std::uint8_t>(n.data(), n.size()));
  return n;
}

Nonce fresh_nonce() { return fresh_nonce(system_random()); }

std::string to_hex(ByteView b) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(b.size() * 2);
  for (auto byte : b) {
    out.push_back(digits[byte >> 4]);
    out.push_back(digits[byte & 0x0f]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0)
    throw Error(ErrorCode::EncodingError, "odd-length hex string");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0)
      throw Error(ErrorCode::EncodingError, "invalid hex digit");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

std::string to_base64(ByteView b) {
  std::string out(4 * ((b.size() + 2) / 3), '\0');
  if (b.empty())
    return out;
  int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), b.data(),
                          checked_len(b.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

Bytes from_base64(std::string_view b64) {
  if (b64.empty())
    return {};
  if (b64.size() % 4 != 0)
    throw Error(ErrorCode::EncodingError, "base64 length not a multiple of 4");
  Bytes out(3 * (b64.size() / 4));
  int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(b64.data()),
                          checked_len(b64.size()));
  if (n < 0)
    throw Error(ErrorCode::EncodingError, "invalid base64");
  std::size_t pad = 0;
  if (b64.back() == '=') ++pad;
  if (b64.size() >= 2 && b64[b64.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

} // namespace digilock::crypto
