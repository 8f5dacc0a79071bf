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

#include "psa/oprf/oprf.h"

#include "psa/base/exception.h"

namespace psa::oprf {

Block OprfOutput(const F128& decoded) {
  return RandomOracleToField(kTagOutput, decoded.ToBytes()).block();
}

std::vector<Block> OprfRunP1(std::span<const Bytes> inputs,
                             const Dealer& dealer, net::Endpoint& ch,
                             RandomSource& rng, const OprfOptions& options) {
  std::vector<F128> values(inputs.size());
  for (size_t i = 0; i < inputs.size(); ++i) {
    values[i] = RandomOracleToField(kTagHashToField, inputs[i]);
  }
  OkvsEncoding enc = OkvsEncode(inputs, values, options.okvs, rng);
  const size_t m = enc.p.size();
  VoleSenderShare vole = dealer.Vole(options.session, m).p1;

  ByteWriter w;
  w.Raw(enc.r.bytes);
  w.U32(static_cast<uint32_t>(options.okvs.band_width));
  w.U32(static_cast<uint32_t>(m));
  for (size_t i = 0; i < m; ++i) w.Raw((vole.a[i] + enc.p[i]).ToBytes());
  ch.Send(net::MsgType::kOprfRAndAPrime, w.Take());

  OkvsHasher hasher(enc.r, m, options.okvs.band_width);
  std::vector<Block> out(inputs.size());
  for (size_t i = 0; i < inputs.size(); ++i) {
    out[i] = OprfOutput(OkvsDecode(vole.c, hasher, inputs[i]));
  }
  return out;
}

OprfSeed OprfRunP2(const Dealer& dealer, net::Endpoint& ch,
                   const OprfOptions& options) {
  const Bytes payload = ch.Recv(net::MsgType::kOprfRAndAPrime);
  ByteReader rd(payload);
  OprfSeed seed;
  seed.r = PrfKey::FromBytes(rd.Raw(16));
  seed.band_width = rd.U32();
  const uint32_t m = rd.U32();
  if (seed.band_width != options.okvs.band_width || m < seed.band_width ||
      rd.remaining() != 16ull * m) {
    PSA_THROW(ProtocolAbort, "malformed OPRF message: w={}, m={}, {} bytes",
              seed.band_width, m, rd.remaining());
  }
  VoleReceiverShare vole = dealer.Vole(options.session, m).p2;
  seed.delta = vole.delta;
  seed.b_prime.resize(m);
  for (size_t i = 0; i < m; ++i) {
    seed.b_prime[i] = vole.b[i] + F128::FromBytes(rd.Raw(16)) * vole.delta;
  }
  return seed;
}

Block OprfEvalSeed(const OprfSeed& seed, ByteSpan y) {
  OkvsHasher hasher(seed.r, seed.b_prime.size(), seed.band_width);
  const F128 h = RandomOracleToField(kTagHashToField, y);
  return OprfOutput(OkvsDecode(seed.b_prime, hasher, y) + h * seed.delta);
}

std::vector<Block> OprfEvalSeed(const OprfSeed& seed,
                                std::span<const Bytes> ys) {
  OkvsHasher hasher(seed.r, seed.b_prime.size(), seed.band_width);
  std::vector<Block> out(ys.size());
  for (size_t i = 0; i < ys.size(); ++i) {
    const F128 h = RandomOracleToField(kTagHashToField, ys[i]);
    out[i] = OprfOutput(OkvsDecode(seed.b_prime, hasher, ys[i]) +
                        h * seed.delta);
  }
  return out;
}

}  // namespace psa::oprf
