// Copyright 2026 The psalign Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <memory>
#include <span>

#include "psa/base/bytes.h"
#include "psa/crypto/block.h"
#include "psa/crypto/gf128.h"

namespace psa {

struct PrfKey {
  std::array<uint8_t, 16> bytes{};

  static PrfKey FromBytes(ByteSpan in);
  bool operator==(const PrfKey&) const = default;
};

std::array<uint8_t, 32> Sha256(ByteSpan data);

// AES-128 in ECB mode over 16-byte blocks. Holds an OpenSSL context, so an
// instance must not be used from two threads at once.
class Aes128 {
 public:
  explicit Aes128(const PrfKey& key);
  ~Aes128();
  Aes128(Aes128&&) noexcept;
  Aes128& operator=(Aes128&&) noexcept;

  Block Encrypt(const Block& in) const;
  void EncryptBlocks(std::span<const Block> in, std::span<Block> out) const;

 private:
  struct Ctx;
  std::unique_ptr<Ctx> ctx_;
};

// Keyed hash H(k, m) = E_k(s(m)) ^ s(m), where s maps the message to one
// block: messages shorter than 16 bytes get 0x80 0x00.. padding, 16-byte
// messages are used verbatim, and longer ones are replaced by the first 16
// bytes of SHA-256(m). Padded short inputs can only alias 16-byte inputs that
// end in the padding pattern, which never happens for UTF-8 text ids.
class MmoHash {
 public:
  explicit MmoHash(const PrfKey& key) : aes_(key) {}

  Block operator()(ByteSpan msg) const;

 private:
  Aes128 aes_;
};

Block PrfMmo(const PrfKey& key, ByteSpan msg);

// Domain tags for the two random oracles of the OPRF.
inline constexpr uint8_t kTagHashToField = 0x01;
inline constexpr uint8_t kTagOutput = 0x02;

// SHA-256(tag || msg) truncated to 128 bits.
F128 RandomOracleToField(uint8_t domain_tag, ByteSpan msg);

}  // namespace psa
