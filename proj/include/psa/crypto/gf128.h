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

#include "psa/crypto/block.h"

namespace psa {

// Element of GF(2^128) = GF(2)[x] / (x^128 + x^7 + x^2 + x + 1). Bit i of the
// underlying block is the coefficient of x^i.
class F128 {
 public:
  constexpr F128() = default;
  constexpr explicit F128(Block v) : v_(v) {}

  static constexpr F128 Zero() { return F128(); }
  static constexpr F128 One() { return F128(Block{1, 0}); }
  static F128 FromBytes(ByteSpan in) { return F128(Block::FromBytes(in)); }

  const Block& block() const { return v_; }
  Bytes ToBytes() const { return v_.ToBytes(); }
  void ToBytes(MutableByteSpan out) const { v_.ToBytes(out); }

  F128 operator+(const F128& o) const { return F128(v_ ^ o.v_); }
  F128& operator+=(const F128& o) {
    v_ ^= o.v_;
    return *this;
  }
  // Characteristic 2: subtraction is addition.
  F128 operator-(const F128& o) const { return *this + o; }
  F128 operator*(const F128& o) const;
  F128& operator*=(const F128& o) { return *this = *this * o; }
  bool operator==(const F128&) const = default;
  bool IsZero() const { return v_.IsZero(); }

 private:
  Block v_;
};

F128 Gf128Mul(const F128& a, const F128& b);

}  // namespace psa
