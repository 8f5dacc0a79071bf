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

#include <optional>
#include <string>
#include <vector>

#include "psa/align/dataset.h"
#include "psa/align/join.h"
#include "psa/net/channel.h"
#include "psa/oprf/okvs.h"
#include "psa/ot/ot.h"

namespace psa::align {

struct ProtocolConfig {
  size_t label_bits = 128;
  ot::OtMode ot_mode = ot::OtMode::kDealer;
  // Shared by the parties that consume dealer material. Level 1 always
  // needs it for the VOLE correlation.
  std::optional<Seed> dealer_seed;
  // Level 2: run the server's two switching-network sessions in parallel.
  bool concurrent = false;
  oprf::OkvsParams okvs;
  std::string session = "psa";
};

struct PartyReport {
  size_t c = 0;
  size_t n = 0;  // P1 record count
  size_t m = 0;  // P2 record count
  double offline_ms = 0;
  double online_ms = 0;
  net::ChannelStats stats;
};

struct PartyOutput {
  JoinedShares shares;
  // Level-1 P1 only: IDs of the intersection in share-row order.
  std::vector<std::string> intersection;
  PartyReport report;
};

struct ServerOutput {
  PartyReport report;
};

// Level 1: P1 learns the intersection; both get shares of the join.
PartyOutput RunLevel1P1(const Dataset& data, net::Endpoint& p2,
                        const ProtocolConfig& cfg, RandomSource& rng);
PartyOutput RunLevel1P2(const Dataset& data, net::Endpoint& p1,
                        const ProtocolConfig& cfg, RandomSource& rng);

// Level 2: the server matches keyed PRF values and learns only sizes.
enum class Owner { kP1, kP2 };
PartyOutput RunLevel2Owner(Owner who, const Dataset& data,
                           net::Endpoint& peer, net::Endpoint& server,
                           const ProtocolConfig& cfg, RandomSource& rng);
ServerOutput RunLevel2Server(net::Endpoint& p1, net::Endpoint& p2,
                             const ProtocolConfig& cfg, RandomSource& rng);

// Ephemeral X25519 over the P1-P2 channel; both sides get the same key.
PrfKey AgreeKey(Owner who, net::Endpoint& peer, RandomSource& rng);

// In-process drivers: one thread per party over channels of `spec`. If any
// party fails, every channel is closed and the first error is rethrown.
struct Level1Result {
  PartyOutput p1;
  PartyOutput p2;
  double wall_ms = 0;
};
struct Level2Result {
  PartyOutput p1;
  PartyOutput p2;
  ServerOutput server;
  double wall_ms = 0;
};

Level1Result RunLevel1(const Dataset& p1, const Dataset& p2,
                       const ProtocolConfig& cfg, const net::ChannelSpec& spec,
                       RandomSource& rng);
Level2Result RunLevel2(const Dataset& p1, const Dataset& p2,
                       const ProtocolConfig& cfg, const net::ChannelSpec& spec,
                       RandomSource& rng);

// Payload helpers.
Bytes EncodePrfVector(std::span<const Block> prf, size_t attr_width);
std::vector<Block> DecodePrfVector(ByteSpan payload, size_t* attr_width);
Bytes EncodeShareVector(const ShareVector& v);
ShareVector DecodeShareVector(ByteSpan payload);

}  // namespace psa::align
