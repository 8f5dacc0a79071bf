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

#include <string_view>
#include <vector>

#include "psa/base/bytes.h"
#include "psa/crypto/gf128.h"
#include "psa/crypto/random.h"

namespace psa::oprf {

// P1's half of a VOLE correlation.
struct VoleSenderShare {
  std::vector<F128> a;
  std::vector<F128> c;
};

// P2's half.
struct VoleReceiverShare {
  std::vector<F128> b;
  F128 delta;
};

// C[i] = A[i] * delta + B[i].
struct VoleCorrelation {
  VoleSenderShare p1;
  VoleReceiverShare p2;

  size_t size() const { return p1.a.size(); }
};

VoleCorrelation VoleDeal(size_t m, RandomSource& rng);

// DEALER_VOLE payloads.
Bytes EncodeVoleShare(const VoleSenderShare& s);
Bytes EncodeVoleShare(const VoleReceiverShare& s);
VoleSenderShare DecodeVoleSenderShare(ByteSpan payload);
VoleReceiverShare DecodeVoleReceiverShare(ByteSpan payload);

// Trusted source of correlated randomness. Every party that holds the same
// dealer seed derives the same material for a given session label, and takes
// only its own half.
class Dealer {
 public:
  explicit Dealer(const Seed& seed) : root_(seed) {}

  VoleCorrelation Vole(std::string_view session, size_t m) const;
  const Seed& seed() const { return root_.seed(); }

 private:
  RandomSource root_;
};

}  // namespace psa::oprf
