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

#include <cstdint>
#include <cstring>
#include <functional>

#include "psa/base/bytes.h"

namespace psa {

// 128-bit string. Byte i of the serialized form is bits [8i, 8i+8) of the
// little-endian integer (lo | hi << 64).
struct Block {
  uint64_t lo = 0;
  uint64_t hi = 0;

  static constexpr size_t kSize = 16;

  static Block FromBytes(ByteSpan in) {
    Block b;
    std::memcpy(&b.lo, in.data(), 8);
    std::memcpy(&b.hi, in.data() + 8, 8);
    return b;
  }
  void ToBytes(MutableByteSpan out) const {
    std::memcpy(out.data(), &lo, 8);
    std::memcpy(out.data() + 8, &hi, 8);
  }
  Bytes ToBytes() const {
    Bytes out(kSize);
    ToBytes(out);
    return out;
  }

  Block operator^(const Block& o) const { return {lo ^ o.lo, hi ^ o.hi}; }
  Block& operator^=(const Block& o) {
    lo ^= o.lo;
    hi ^= o.hi;
    return *this;
  }
  bool operator==(const Block&) const = default;
  bool IsZero() const { return (lo | hi) == 0; }
};

static_assert(sizeof(Block) == 16);

struct BlockHash {
  size_t operator()(const Block& b) const {
    return static_cast<size_t>(b.lo ^ (b.hi * 0x9e3779b97f4a7c15ULL));
  }
};

}  // namespace psa
