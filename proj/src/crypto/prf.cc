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

#include "psa/crypto/prf.h"

#include <openssl/evp.h>
#include <openssl/sha.h>

#include <cstring>

#include "psa/base/exception.h"

namespace psa {

PrfKey PrfKey::FromBytes(ByteSpan in) {
  PSA_ENFORCE(in.size() == 16, "prf key must be 16 bytes, got {}", in.size());
  PrfKey k;
  std::memcpy(k.bytes.data(), in.data(), 16);
  return k;
}

std::array<uint8_t, 32> Sha256(ByteSpan data) {
  std::array<uint8_t, 32> out;
  SHA256(data.data(), data.size(), out.data());
  return out;
}

struct Aes128::Ctx {
  EVP_CIPHER_CTX* ctx = nullptr;
  ~Ctx() { EVP_CIPHER_CTX_free(ctx); }
};

Aes128::Aes128(const PrfKey& key) : ctx_(std::make_unique<Ctx>()) {
  ctx_->ctx = EVP_CIPHER_CTX_new();
  if (ctx_->ctx == nullptr ||
      EVP_EncryptInit_ex(ctx_->ctx, EVP_aes_128_ecb(), nullptr,
                         key.bytes.data(), nullptr) != 1) {
    throw Error("AES-128 context setup failed");
  }
  EVP_CIPHER_CTX_set_padding(ctx_->ctx, 0);
}

Aes128::~Aes128() = default;
Aes128::Aes128(Aes128&&) noexcept = default;
Aes128& Aes128::operator=(Aes128&&) noexcept = default;

Block Aes128::Encrypt(const Block& in) const {
  Block out;
  EncryptBlocks({&in, 1}, {&out, 1});
  return out;
}

void Aes128::EncryptBlocks(std::span<const Block> in,
                           std::span<Block> out) const {
  PSA_ENFORCE(in.size() == out.size(), "aes batch size mismatch");
  if (in.empty()) {
    return;
  }
  int len = 0;
  const size_t total = in.size() * sizeof(Block);
  PSA_ENFORCE(total <= static_cast<size_t>(INT32_MAX), "aes batch too large");
  if (EVP_EncryptUpdate(ctx_->ctx, reinterpret_cast<uint8_t*>(out.data()),
                        &len, reinterpret_cast<const uint8_t*>(in.data()),
                        static_cast<int>(total)) != 1 ||
      static_cast<size_t>(len) != total) {
    throw Error("AES-128 encryption failed");
  }
}

Block MmoHash::operator()(ByteSpan msg) const {
  Block x;
  if (msg.size() == Block::kSize) {
    x = Block::FromBytes(msg);
  } else if (msg.size() < Block::kSize) {
    uint8_t buf[Block::kSize] = {};
    std::memcpy(buf, msg.data(), msg.size());
    buf[msg.size()] = 0x80;
    x = Block::FromBytes(buf);
  } else {
    auto digest = Sha256(msg);
    x = Block::FromBytes({digest.data(), Block::kSize});
  }
  return aes_.Encrypt(x) ^ x;
}

Block PrfMmo(const PrfKey& key, ByteSpan msg) { return MmoHash(key)(msg); }

F128 RandomOracleToField(uint8_t domain_tag, ByteSpan msg) {
  Bytes buf;
  buf.reserve(msg.size() + 1);
  buf.push_back(domain_tag);
  buf.insert(buf.end(), msg.begin(), msg.end());
  auto digest = Sha256(buf);
  return F128::FromBytes({digest.data(), 16});
}

}  // namespace psa
