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

#include "psa/oprf/vole.h"

#include "fmt/format.h"
#include "psa/base/exception.h"

namespace psa::oprf {

VoleCorrelation VoleDeal(size_t m, RandomSource& rng) {
  PSA_ENFORCE(m >= 1, "VOLE dimension must be positive");
  VoleCorrelation v;
  v.p2.delta = F128(rng.NextBlock());
  v.p1.a.resize(m);
  v.p1.c.resize(m);
  v.p2.b.resize(m);
  for (size_t i = 0; i < m; ++i) {
    v.p1.a[i] = F128(rng.NextBlock());
    v.p2.b[i] = F128(rng.NextBlock());
    v.p1.c[i] = v.p1.a[i] * v.p2.delta + v.p2.b[i];
  }
  return v;
}

namespace {

void PutElements(ByteWriter& w, const std::vector<F128>& v) {
  w.U32(static_cast<uint32_t>(v.size()));
  for (const auto& x : v) w.Raw(x.ToBytes());
}

std::vector<F128> GetElements(ByteReader& rd) {
  const uint32_t n = rd.U32();
  if (rd.remaining() < 16ull * n) {
    PSA_THROW(ProtocolAbort, "VOLE payload too short for {} elements", n);
  }
  std::vector<F128> v(n);
  for (auto& x : v) x = F128::FromBytes(rd.Raw(16));
  return v;
}

}  // namespace

Bytes EncodeVoleShare(const VoleSenderShare& s) {
  ByteWriter w;
  w.U8(1);
  PutElements(w, s.a);
  PutElements(w, s.c);
  return w.Take();
}

Bytes EncodeVoleShare(const VoleReceiverShare& s) {
  ByteWriter w;
  w.U8(2);
  w.Raw(s.delta.ToBytes());
  PutElements(w, s.b);
  return w.Take();
}

VoleSenderShare DecodeVoleSenderShare(ByteSpan payload) {
  ByteReader rd(payload);
  if (rd.U8() != 1) PSA_THROW(ProtocolAbort, "not a VOLE sender share");
  VoleSenderShare s;
  s.a = GetElements(rd);
  s.c = GetElements(rd);
  rd.ExpectEnd();
  if (s.a.size() != s.c.size()) {
    PSA_THROW(ProtocolAbort, "VOLE share halves differ in length");
  }
  return s;
}

VoleReceiverShare DecodeVoleReceiverShare(ByteSpan payload) {
  ByteReader rd(payload);
  if (rd.U8() != 2) PSA_THROW(ProtocolAbort, "not a VOLE receiver share");
  VoleReceiverShare s;
  s.delta = F128::FromBytes(rd.Raw(16));
  s.b = GetElements(rd);
  rd.ExpectEnd();
  return s;
}

VoleCorrelation Dealer::Vole(std::string_view session, size_t m) const {
  auto rng = root_.Derive(fmt::format("vole/{}/{}", session, m));
  return VoleDeal(m, rng);
}

}  // namespace psa::oprf
