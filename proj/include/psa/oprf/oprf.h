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

#include <span>
#include <string>
#include <vector>

#include "psa/crypto/block.h"
#include "psa/net/channel.h"
#include "psa/oprf/okvs.h"
#include "psa/oprf/vole.h"

namespace psa::oprf {

// What P2 keeps: enough to evaluate the PRF on any input.
struct OprfSeed {
  std::vector<F128> b_prime;
  F128 delta;
  PrfKey r;
  size_t band_width = 64;
};

struct OprfOptions {
  OkvsParams okvs;
  // Dealer session label; both parties must use the same one.
  std::string session = "oprf";
};

// P1 side. Encodes (x, H_B(x)), masks the encoding with its VOLE share and
// returns H_o(decode(C, x)) for every input.
std::vector<Block> OprfRunP1(std::span<const Bytes> inputs,
                             const Dealer& dealer, net::Endpoint& ch,
                             RandomSource& rng,
                             const OprfOptions& options = {});

// P2 side. Returns the seed B' = B + A' * delta together with delta and r.
OprfSeed OprfRunP2(const Dealer& dealer, net::Endpoint& ch,
                   const OprfOptions& options = {});

// H_o(decode(B', y) + H_B(y) * delta).
Block OprfEvalSeed(const OprfSeed& seed, ByteSpan y);
std::vector<Block> OprfEvalSeed(const OprfSeed& seed,
                                std::span<const Bytes> ys);

// P1's value for x given the decoded C entry; exposed for tests.
Block OprfOutput(const F128& decoded);

}  // namespace psa::oprf
