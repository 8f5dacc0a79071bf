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

#include "psa/crypto/random.h"

#include <sodium.h>

#include <cstring>

#include "psa/base/exception.h"
#include "psa/crypto/prf.h"

namespace psa {

namespace {
void EnsureSodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) {
    throw Error("libsodium initialization failed");
  }
}
}  // namespace

Seed SeedFromString(std::string_view s) { return Sha256(AsBytes(s)); }

RandomSource::RandomSource(const Seed& seed) : seed_(seed) { EnsureSodium(); }

RandomSource RandomSource::FromOsEntropy() {
  EnsureSodium();
  Seed seed;
  randombytes_buf(seed.data(), seed.size());
  return RandomSource(seed);
}

RandomSource RandomSource::Derive(std::string_view label) const {
  Bytes material(seed_.begin(), seed_.end());
  const auto tag = AsBytes("psa.rng.derive/");
  material.insert(material.end(), tag.begin(), tag.end());
  const auto lb = AsBytes(label);
  material.insert(material.end(), lb.begin(), lb.end());
  return RandomSource(Sha256(material));
}

void RandomSource::Refill() {
  static constexpr uint8_t kNonce[crypto_stream_chacha20_NONCEBYTES] = {};
  std::memset(buffer_.data(), 0, buffer_.size());
  // 64-byte ChaCha blocks; the counter is in blocks.
  crypto_stream_chacha20_xor_ic(buffer_.data(), buffer_.data(), buffer_.size(),
                                kNonce, counter_, seed_.data());
  counter_ += kBufferSize / 64;
  pos_ = 0;
}

void RandomSource::Fill(MutableByteSpan out) {
  size_t done = 0;
  while (done < out.size()) {
    if (pos_ == kBufferSize) {
      Refill();
    }
    size_t take = std::min(out.size() - done, kBufferSize - pos_);
    std::memcpy(out.data() + done, buffer_.data() + pos_, take);
    pos_ += take;
    done += take;
  }
}

Bytes RandomSource::NextBytes(size_t n) {
  Bytes out(n);
  Fill(out);
  return out;
}

uint64_t RandomSource::NextU64() {
  uint64_t v;
  Fill({reinterpret_cast<uint8_t*>(&v), sizeof(v)});
  return v;
}

Block RandomSource::NextBlock() {
  Block b;
  b.lo = NextU64();
  b.hi = NextU64();
  return b;
}

bool RandomSource::NextBit() {
  uint8_t b;
  Fill({&b, 1});
  return (b & 1) != 0;
}

uint64_t RandomSource::Uniform(uint64_t bound) {
  PSA_ENFORCE(bound > 0, "uniform bound must be positive");
  // Rejection sampling over the largest multiple of bound.
  const uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  while (true) {
    uint64_t v = NextU64();
    if (v <= limit) {
      return v % bound;
    }
  }
}

Seed RandomSource::NextSeed() {
  Seed s;
  Fill(s);
  return s;
}

}  // namespace psa
