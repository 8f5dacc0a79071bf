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
#include <cstdint>
#include <string_view>

#include "psa/base/bytes.h"
#include "psa/crypto/block.h"

namespace psa {

using Seed = std::array<uint8_t, 32>;

// SHA-256 of an arbitrary string; convenient for test seeds and CLI flags.
Seed SeedFromString(std::string_view s);

// Deterministic ChaCha20 keystream keyed by a 256-bit seed. Identical seeds
// yield identical streams. Not thread-safe; each session owns its source.
class RandomSource {
 public:
  explicit RandomSource(const Seed& seed);
  static RandomSource FromOsEntropy();

  RandomSource(const RandomSource&) = delete;
  RandomSource& operator=(const RandomSource&) = delete;
  RandomSource(RandomSource&&) = default;
  RandomSource& operator=(RandomSource&&) = default;

  // Child source whose seed depends only on this source's seed and `label`.
  RandomSource Derive(std::string_view label) const;

  void Fill(MutableByteSpan out);
  Bytes NextBytes(size_t n);
  uint64_t NextU64();
  Block NextBlock();
  bool NextBit();
  // Uniform in [0, bound). bound must be positive.
  uint64_t Uniform(uint64_t bound);
  Seed NextSeed();

  const Seed& seed() const { return seed_; }

 private:
  void Refill();

  static constexpr size_t kBufferSize = 4096;

  Seed seed_;
  uint64_t counter_ = 0;
  std::array<uint8_t, kBufferSize> buffer_{};
  size_t pos_ = kBufferSize;
};

}  // namespace psa
