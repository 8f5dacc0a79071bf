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

#include <thread>

#include "gtest/gtest.h"
#include "psa/base/exception.h"
#include "psa/ot/ot.h"

namespace psa::ot {
namespace {

OtMessages RandomMessages(size_t count, size_t len, RandomSource& rng) {
  OtMessages msgs(count, len);
  for (size_t i = 0; i < count; ++i) {
    rng.Fill(msgs.m0(i));
    rng.Fill(msgs.m1(i));
  }
  return msgs;
}

ChoiceBits RandomChoices(size_t count, RandomSource& rng) {
  ChoiceBits c(count);
  for (auto& b : c) b = rng.NextBit();
  return c;
}

// Runs sender and receiver on a memory pair; returns the receiver output.
template <typename SendFn, typename RecvFn>
Bytes RunPair(SendFn send, RecvFn recv, net::ChannelStats* sender_stats =
                                            nullptr) {
  auto [s, r] = net::OpenMemoryPair();
  std::thread t([&, &s = s] { send(*s); });
  Bytes out = recv(*r);
  t.join();
  if (sender_stats != nullptr) *sender_stats = s->stats();
  return out;
}

void ExpectChosen(const OtMessages& msgs, const ChoiceBits& c,
                  const Bytes& got) {
  const size_t len = msgs.msg_len();
  ASSERT_EQ(got.size(), c.size() * len);
  for (size_t i = 0; i < c.size(); ++i) {
    ByteSpan want = c[i] ? msgs.m1(i) : msgs.m0(i);
    ASSERT_TRUE(std::equal(want.begin(), want.end(), got.begin() + i * len))
        << "instance " << i;
  }
}

TEST(BitsTest, PackRoundTrip) {
  ChoiceBits bits = {1, 0, 0, 1, 1, 1, 0, 1, 1};
  Bytes packed = PackBits(bits);
  EXPECT_EQ(packed.size(), 2u);
  EXPECT_EQ(UnpackBits(packed, bits.size()), bits);
  EXPECT_THROW(UnpackBits(packed, 20), ProtocolAbort);
}

TEST(GroupOtTest, SingleInstanceBothChoices) {
  RandomSource rng(SeedFromString("group-1"));
  auto msgs = RandomMessages(1, 32, rng);
  for (uint8_t b : {0, 1}) {
    ChoiceBits c = {b};
    RandomSource srng = rng.Derive("s"), rrng = rng.Derive("r");
    Bytes got = RunPair([&](net::Endpoint& ch) { GroupOtSend(msgs, ch, srng); },
                        [&](net::Endpoint& ch) {
                          return GroupOtReceive(c, 32, ch, rrng);
                        });
    ExpectChosen(msgs, c, got);
  }
}

TEST(GroupOtTest, BatchAndAccounting) {
  constexpr size_t kCount = 500, kLen = 32;
  RandomSource rng(SeedFromString("group-batch"));
  auto msgs = RandomMessages(kCount, kLen, rng);
  auto c = RandomChoices(kCount, rng);
  RandomSource srng = rng.Derive("s"), rrng = rng.Derive("r");
  net::ChannelStats st;
  Bytes got = RunPair([&](net::Endpoint& ch) { GroupOtSend(msgs, ch, srng); },
                      [&](net::Endpoint& ch) {
                        return GroupOtReceive(c, kLen, ch, rrng);
                      },
                      &st);
  ExpectChosen(msgs, c, got);
  // Receiver: one 32-byte element per instance in one frame.
  EXPECT_EQ(st.bytes_received, 5 + kCount * 32);
  // Sender: its own element, then two ciphertexts per instance.
  EXPECT_EQ(st.bytes_sent, (5 + 32) + (5 + 2 * kCount * kLen));
  EXPECT_EQ(st.frames_sent(net::MsgType::kOtS2R), 2u);
  EXPECT_EQ(st.frames_received(net::MsgType::kOtR2S), 1u);
}

TEST(GroupOtTest, RejectsInvalidPoint) {
  RandomSource rng(SeedFromString("group-bad"));
  auto msgs = RandomMessages(1, 16, rng);
  auto [s, r] = net::OpenMemoryPair();
  std::thread t([&, &r = r] {
    r->Recv(net::MsgType::kOtS2R);
    r->Send(net::MsgType::kOtR2S, Bytes(32, 0xff));
  });
  EXPECT_THROW(GroupOtSend(msgs, *s, rng), ProtocolAbort);
  t.join();
}

TEST(DealerOtTest, TenThousandInstances) {
  constexpr size_t kCount = 10000, kLen = 32;
  RandomSource rng(SeedFromString("dealer-batch"));
  auto msgs = RandomMessages(kCount, kLen, rng);
  auto c = RandomChoices(kCount, rng);
  auto [sp, rp] = DealerOtSetup(kCount, kLen, rng);
  Bytes got = RunPair([&, &sp = sp](net::Endpoint& ch) {
    DealerOtSend(sp, msgs, ch);
  },
                      [&, &rp = rp](net::Endpoint& ch) {
                        return DealerOtReceive(rp, c, ch);
                      });
  ExpectChosen(msgs, c, got);
}

TEST(DealerOtTest, ZeroMessagesGiveZero) {
  RandomSource rng(SeedFromString("dealer-zero"));
  OtMessages msgs(1, 32);
  ChoiceBits c = {1};
  auto [sp, rp] = DealerOtSetup(1, 32, rng);
  Bytes got = RunPair([&, &sp = sp](net::Endpoint& ch) {
    DealerOtSend(sp, msgs, ch);
  },
                      [&, &rp = rp](net::Endpoint& ch) {
                        return DealerOtReceive(rp, c, ch);
                      });
  EXPECT_EQ(got, Bytes(32, 0));
}

TEST(DealerOtTest, PadsAreSingleUse) {
  RandomSource rng(SeedFromString("dealer-reuse"));
  OtMessages msgs(2, 16);
  ChoiceBits c = {0, 1};
  auto [sp, rp] = DealerOtSetup(2, 16, rng);
  RunPair([&, &sp = sp](net::Endpoint& ch) { DealerOtSend(sp, msgs, ch); },
          [&, &rp = rp](net::Endpoint& ch) {
            return DealerOtReceive(rp, c, ch);
          });
  EXPECT_TRUE(sp.consumed());
  EXPECT_TRUE(rp.consumed());
  auto [a, b] = net::OpenMemoryPair();
  EXPECT_THROW(DealerOtSend(sp, msgs, *a), InvalidArgument);
  EXPECT_THROW(DealerOtReceive(rp, c, *b), InvalidArgument);
}

TEST(OtProviderTest, ModesAgree) {
  constexpr size_t kCount = 300, kLen = 64;
  RandomSource rng(SeedFromString("modes"));
  auto msgs = RandomMessages(kCount, kLen, rng);
  auto c = RandomChoices(kCount, rng);
  const Seed dealer = SeedFromString("dealer-seed");
  Bytes outputs[2];
  for (int mode = 0; mode < 2; ++mode) {
    auto sender = mode == 0 ? MakeGroupOt(rng.Derive("gs"))
                            : MakeDealerOt(dealer, "sess");
    auto receiver = mode == 0 ? MakeGroupOt(rng.Derive("gr"))
                              : MakeDealerOt(dealer, "sess");
    // Two batches back to back, checking the second.
    for (int batch = 0; batch < 2; ++batch) {
      outputs[mode] = RunPair(
          [&](net::Endpoint& ch) { sender->Send(msgs, ch); },
          [&](net::Endpoint& ch) { return receiver->Receive(c, kLen, ch); });
    }
  }
  EXPECT_EQ(outputs[0], outputs[1]);
  ExpectChosen(msgs, c, outputs[1]);
}

}  // namespace
}  // namespace psa::ot
