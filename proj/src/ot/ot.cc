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

#include "psa/ot/ot.h"

#include <sodium.h>

#include <cstring>

#include "psa/base/exception.h"
#include "psa/crypto/prf.h"

namespace psa::ot {

std::string_view OtModeName(OtMode mode) {
  return mode == OtMode::kGroup ? "group" : "dealer";
}

OtMode ParseOtMode(std::string_view name) {
  if (name == "group") return OtMode::kGroup;
  if (name == "dealer") return OtMode::kDealer;
  PSA_THROW(InvalidArgument, "unknown OT mode '{}'", name);
}

OtMessages::OtMessages(size_t count, size_t msg_len)
    : count_(count),
      msg_len_(msg_len),
      m0_(count * msg_len),
      m1_(count * msg_len) {}

Bytes PackBits(std::span<const uint8_t> bits) {
  Bytes out((bits.size() + 7) / 8, 0);
  for (size_t i = 0; i < bits.size(); ++i) {
    out[i / 8] |= static_cast<uint8_t>((bits[i] & 1) << (i % 8));
  }
  return out;
}

ChoiceBits UnpackBits(ByteSpan packed, size_t count) {
  if (packed.size() != (count + 7) / 8) {
    PSA_THROW(ProtocolAbort, "packed bit vector has {} bytes, expected {}",
              packed.size(), (count + 7) / 8);
  }
  ChoiceBits out(count);
  for (size_t i = 0; i < count; ++i) out[i] = (packed[i / 8] >> (i % 8)) & 1;
  return out;
}

std::pair<OtSenderPads, OtReceiverPads> DealerOtSetup(size_t count,
                                                      size_t msg_len,
                                                      RandomSource& rng) {
  PSA_ENFORCE(count >= 1, "empty OT batch");
  OtSenderPads s;
  OtReceiverPads r;
  s.count_ = r.count_ = count;
  s.msg_len_ = r.msg_len_ = msg_len;
  s.r0_ = rng.NextBytes(count * msg_len);
  s.r1_ = rng.NextBytes(count * msg_len);
  r.c_.resize(count);
  r.rc_.resize(count * msg_len);
  for (size_t i = 0; i < count; ++i) {
    r.c_[i] = rng.NextBit() ? 1 : 0;
    const Bytes& src = r.c_[i] ? s.r1_ : s.r0_;
    std::memcpy(r.rc_.data() + i * msg_len, src.data() + i * msg_len, msg_len);
  }
  return {std::move(s), std::move(r)};
}

void DealerOtSend(OtSenderPads& pads, const OtMessages& msgs,
                  net::Endpoint& ch) {
  if (pads.consumed_) PSA_THROW(InvalidArgument, "OT pads already consumed");
  PSA_ENFORCE(msgs.count() == pads.count_ && msgs.msg_len() == pads.msg_len_,
              "batch {}x{} does not match pads {}x{}", msgs.count(),
              msgs.msg_len(), pads.count_, pads.msg_len_);
  pads.consumed_ = true;

  const Bytes msg = ch.Recv(net::MsgType::kOtR2S);
  ByteReader rd(msg);
  const uint32_t count = rd.U32();
  if (count != pads.count_) {
    PSA_THROW(ProtocolAbort, "receiver batch size {} != {}", count,
              pads.count_);
  }
  const ChoiceBits e = UnpackBits(rd.Raw(rd.remaining()), count);

  const size_t len = pads.msg_len_;
  Bytes out(2 * count * len);
  for (size_t i = 0; i < count; ++i) {
    const uint8_t* ra = (e[i] ? pads.r1_ : pads.r0_).data() + i * len;
    const uint8_t* rb = (e[i] ? pads.r0_ : pads.r1_).data() + i * len;
    XorTo({out.data() + 2 * i * len, len}, msgs.m0(i), {ra, len});
    XorTo({out.data() + (2 * i + 1) * len, len}, msgs.m1(i), {rb, len});
  }
  pads.r0_.clear();
  pads.r1_.clear();
  ch.Send(net::MsgType::kOtS2R, std::move(out));
}

Bytes DealerOtReceive(OtReceiverPads& pads, std::span<const uint8_t> choices,
                      net::Endpoint& ch) {
  if (pads.consumed_) PSA_THROW(InvalidArgument, "OT pads already consumed");
  PSA_ENFORCE(choices.size() == pads.count_, "{} choices for {} pads",
              choices.size(), pads.count_);
  pads.consumed_ = true;

  const size_t count = pads.count_;
  const size_t len = pads.msg_len_;
  ChoiceBits e(count);
  for (size_t i = 0; i < count; ++i) e[i] = (choices[i] & 1) ^ pads.c_[i];
  ByteWriter w;
  w.U32(static_cast<uint32_t>(count));
  w.Raw(PackBits(e));
  ch.Send(net::MsgType::kOtR2S, w.Take());

  Bytes y = ch.Recv(net::MsgType::kOtS2R);
  if (y.size() != 2 * count * len) {
    PSA_THROW(ProtocolAbort, "OT reply has {} bytes, expected {}", y.size(),
              2 * count * len);
  }
  Bytes out(count * len);
  for (size_t i = 0; i < count; ++i) {
    const uint8_t* yb = y.data() + (2 * i + (choices[i] & 1)) * len;
    XorTo({out.data() + i * len, len}, {yb, len},
          {pads.rc_.data() + i * len, len});
  }
  pads.rc_.clear();
  return out;
}

namespace {

constexpr size_t kPoint = crypto_core_ristretto255_BYTES;
constexpr size_t kScalar = crypto_core_ristretto255_SCALARBYTES;

using Point = std::array<uint8_t, kPoint>;

void RandomScalar(RandomSource& rng, uint8_t* out) {
  uint8_t wide[crypto_core_ristretto255_NONREDUCEDSCALARBYTES];
  rng.Fill(wide);
  crypto_core_ristretto255_scalar_reduce(out, wide);
}

// Pad for instance i: ChaCha20 keyed by SHA-256(A || B_i || i || shared).
void XorPad(const Point& a, ByteSpan b, uint32_t i, const Point& shared,
            ByteSpan in, MutableByteSpan out) {
  uint8_t material[3 * kPoint + 4];
  std::memcpy(material, a.data(), kPoint);
  std::memcpy(material + kPoint, b.data(), kPoint);
  PutU32BE({material + 2 * kPoint, 4}, i);
  std::memcpy(material + 2 * kPoint + 4, shared.data(), kPoint);
  const auto key = Sha256(ByteSpan(material, sizeof(material)));
  static constexpr uint8_t kNonce[crypto_stream_chacha20_NONCEBYTES] = {};
  crypto_stream_chacha20_xor(out.data(), in.data(), in.size(), kNonce,
                             key.data());
}

}  // namespace

void GroupOtSend(const OtMessages& msgs, net::Endpoint& ch,
                 RandomSource& rng) {
  PSA_ENFORCE(msgs.count() >= 1, "empty OT batch");
  uint8_t a[kScalar];
  RandomScalar(rng, a);
  Point big_a;
  crypto_scalarmult_ristretto255_base(big_a.data(), a);
  ch.Send(net::MsgType::kOtS2R, Bytes(big_a.begin(), big_a.end()));
  // aA, subtracted from aB_i to get the key for m1.
  Point aa;
  if (crypto_scalarmult_ristretto255(aa.data(), a, big_a.data()) != 0) {
    PSA_THROW(Error, "degenerate OT sender key");
  }

  const Bytes bs = ch.Recv(net::MsgType::kOtR2S);
  const size_t count = msgs.count();
  const size_t len = msgs.msg_len();
  if (bs.size() != count * kPoint) {
    PSA_THROW(ProtocolAbort, "OT receiver sent {} bytes, expected {}",
              bs.size(), count * kPoint);
  }
  Bytes out(2 * count * len);
  for (size_t i = 0; i < count; ++i) {
    ByteSpan b(bs.data() + i * kPoint, kPoint);
    Point k0, k1;
    if (crypto_scalarmult_ristretto255(k0.data(), a, b.data()) != 0) {
      PSA_THROW(ProtocolAbort, "invalid group element in OT instance {}", i);
    }
    crypto_core_ristretto255_sub(k1.data(), k0.data(), aa.data());
    XorPad(big_a, b, static_cast<uint32_t>(i), k0, msgs.m0(i),
           {out.data() + 2 * i * len, len});
    XorPad(big_a, b, static_cast<uint32_t>(i), k1, msgs.m1(i),
           {out.data() + (2 * i + 1) * len, len});
  }
  ch.Send(net::MsgType::kOtS2R, std::move(out));
}

Bytes GroupOtReceive(std::span<const uint8_t> choices, size_t msg_len,
                     net::Endpoint& ch, RandomSource& rng) {
  PSA_ENFORCE(!choices.empty(), "empty OT batch");
  const Bytes ab = ch.Recv(net::MsgType::kOtS2R);
  if (ab.size() != kPoint ||
      crypto_core_ristretto255_is_valid_point(ab.data()) != 1) {
    PSA_THROW(ProtocolAbort, "invalid OT sender group element");
  }
  Point big_a;
  std::memcpy(big_a.data(), ab.data(), kPoint);

  const size_t count = choices.size();
  std::vector<uint8_t> scalars(count * kScalar);
  Bytes bs(count * kPoint);
  for (size_t i = 0; i < count; ++i) {
    uint8_t* bi = scalars.data() + i * kScalar;
    RandomScalar(rng, bi);
    uint8_t* out = bs.data() + i * kPoint;
    crypto_scalarmult_ristretto255_base(out, bi);
    if (choices[i] & 1) {
      crypto_core_ristretto255_add(out, out, big_a.data());
    }
  }
  ch.Send(net::MsgType::kOtR2S, bs);

  const Bytes cts = ch.Recv(net::MsgType::kOtS2R);
  if (cts.size() != 2 * count * msg_len) {
    PSA_THROW(ProtocolAbort, "OT ciphertexts have {} bytes, expected {}",
              cts.size(), 2 * count * msg_len);
  }
  Bytes result(count * msg_len);
  for (size_t i = 0; i < count; ++i) {
    Point shared;
    if (crypto_scalarmult_ristretto255(shared.data(),
                                       scalars.data() + i * kScalar,
                                       big_a.data()) != 0) {
      PSA_THROW(ProtocolAbort, "degenerate OT sender key");
    }
    const uint8_t* ct = cts.data() + (2 * i + (choices[i] & 1)) * msg_len;
    XorPad(big_a, {bs.data() + i * kPoint, kPoint}, static_cast<uint32_t>(i),
           shared, {ct, msg_len}, {result.data() + i * msg_len, msg_len});
  }
  sodium_memzero(scalars.data(), scalars.size());
  return result;
}

namespace {

class GroupOtProvider final : public OtProvider {
 public:
  explicit GroupOtProvider(RandomSource rng) : rng_(std::move(rng)) {}

  OtMode mode() const override { return OtMode::kGroup; }
  void Send(const OtMessages& msgs, net::Endpoint& ch) override {
    GroupOtSend(msgs, ch, rng_);
  }
  Bytes Receive(std::span<const uint8_t> choices, size_t msg_len,
                net::Endpoint& ch) override {
    return GroupOtReceive(choices, msg_len, ch, rng_);
  }

 private:
  RandomSource rng_;
};

class DealerOtProvider final : public OtProvider {
 public:
  DealerOtProvider(const Seed& seed, std::string session)
      : root_(seed), session_(std::move(session)) {}

  OtMode mode() const override { return OtMode::kDealer; }

  void Send(const OtMessages& msgs, net::Endpoint& ch) override {
    auto rng = NextBatchRng();
    auto pads = DealerOtSetup(msgs.count(), msgs.msg_len(), rng);
    DealerOtSend(pads.first, msgs, ch);
  }

  Bytes Receive(std::span<const uint8_t> choices, size_t msg_len,
                net::Endpoint& ch) override {
    auto rng = NextBatchRng();
    auto pads = DealerOtSetup(choices.size(), msg_len, rng);
    return DealerOtReceive(pads.second, choices, ch);
  }

 private:
  RandomSource NextBatchRng() {
    return root_.Derive(fmt::format("ot/{}/{}", session_, batch_++));
  }

  RandomSource root_;
  std::string session_;
  uint64_t batch_ = 0;
};

}  // namespace

std::unique_ptr<OtProvider> MakeGroupOt(RandomSource rng) {
  return std::make_unique<GroupOtProvider>(std::move(rng));
}

std::unique_ptr<OtProvider> MakeDealerOt(const Seed& dealer_seed,
                                         std::string session) {
  return std::make_unique<DealerOtProvider>(dealer_seed, std::move(session));
}

}  // namespace psa::ot
