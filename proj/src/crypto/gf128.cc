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

#include "psa/crypto/gf128.h"

#if defined(__PCLMUL__)
#include <smmintrin.h>
#include <wmmintrin.h>
#endif

namespace psa {

namespace {

using u128 = unsigned __int128;

Block FromU128(u128 v) {
  return {static_cast<uint64_t>(v), static_cast<uint64_t>(v >> 64)};
}

#if defined(__PCLMUL__)
u128 ClMul64(uint64_t a, uint64_t b) {
  __m128i x = _mm_set_epi64x(0, static_cast<long long>(a));
  __m128i y = _mm_set_epi64x(0, static_cast<long long>(b));
  __m128i r = _mm_clmulepi64_si128(x, y, 0x00);
  uint64_t lo = static_cast<uint64_t>(_mm_cvtsi128_si64(r));
  uint64_t hi = static_cast<uint64_t>(_mm_extract_epi64(r, 1));
  return (u128{hi} << 64) | lo;
}
#else
// 4-bit windowed carry-less multiply.
u128 ClMul64(uint64_t a, uint64_t b) {
  u128 table[16];
  table[0] = 0;
  for (int i = 1; i < 16; ++i) {
    table[i] = (i & 1) ? u128{b} : 0;
    if (i & 2) table[i] ^= u128{b} << 1;
    if (i & 4) table[i] ^= u128{b} << 2;
    if (i & 8) table[i] ^= u128{b} << 3;
  }
  u128 acc = 0;
  for (int shift = 60; shift >= 0; shift -= 4) {
    acc = (acc << 4) ^ table[(a >> shift) & 0xf];
  }
  return acc;
}
#endif

// Folds the high 128 bits of a 256-bit product using x^128 = x^7 + x^2 + x + 1.
u128 Reduce(u128 hi, u128 lo) {
  u128 folded = hi ^ (hi << 1) ^ (hi << 2) ^ (hi << 7);
  u128 spill = (hi >> 127) ^ (hi >> 126) ^ (hi >> 121);
  folded ^= spill ^ (spill << 1) ^ (spill << 2) ^ (spill << 7);
  return lo ^ folded;
}

}  // namespace

F128 Gf128Mul(const F128& a, const F128& b) {
  const Block& x = a.block();
  const Block& y = b.block();
  u128 ll = ClMul64(x.lo, y.lo);
  u128 hh = ClMul64(x.hi, y.hi);
  u128 mid = ClMul64(x.lo, y.hi) ^ ClMul64(x.hi, y.lo);
  u128 lo = ll ^ (mid << 64);
  u128 hi = hh ^ (mid >> 64);
  return F128(FromU128(Reduce(hi, lo)));
}

F128 F128::operator*(const F128& o) const { return Gf128Mul(*this, o); }

}  // namespace psa
