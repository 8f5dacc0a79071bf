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

#include <chrono>
#include <thread>

#include "gtest/gtest.h"
#include "psa/base/exception.h"
#include "psa/crypto/random.h"
#include "psa/net/channel.h"

namespace psa::net {
namespace {

Bytes RandomPayload(size_t n, uint64_t tag) {
  auto rng =
      RandomSource(SeedFromString("net-test")).Derive(std::to_string(tag));
  return rng.NextBytes(n);
}

TEST(FrameTest, EncodeDecodeRoundTrip) {
  Frame f{MsgType::kPrfVec, RandomPayload(1 << 20, 1)};
  Bytes wire = EncodeFrame(f);
  ASSERT_EQ(wire.size(), f.payload.size() + 5);
  EXPECT_EQ(wire[0], 7);
  EXPECT_EQ(GetU32BE(ByteSpan(wire).subspan(1)), 1u << 20);
  size_t consumed = 0;
  EXPECT_EQ(DecodeFrame(wire, &consumed), f);
  EXPECT_EQ(consumed, wire.size());
}

TEST(FrameTest, EmptyPayload) {
  Frame f{MsgType::kControl, {}};
  Bytes wire = EncodeFrame(f);
  EXPECT_EQ(wire, (Bytes{10, 0, 0, 0, 0}));
  EXPECT_EQ(DecodeFrame(wire), f);
}

TEST(FrameTest, RejectsUnknownType) {
  Bytes wire = {0x0b, 0, 0, 0, 0};
  EXPECT_THROW(DecodeFrame(wire), TransportError);
  wire[0] = 0;
  EXPECT_THROW(DecodeFrame(wire), TransportError);
}

TEST(FrameTest, RejectsTruncation) {
  Bytes wire = EncodeFrame({MsgType::kRho2, {1, 2, 3}});
  EXPECT_THROW(DecodeFrame(ByteSpan(wire).first(4)), TransportError);
  EXPECT_THROW(DecodeFrame(ByteSpan(wire).first(7)), TransportError);
}

TEST(MemoryChannelTest, OrderedDeliveryAndStats) {
  auto [a, b] = OpenMemoryPair();
  a->Send(MsgType::kOtR2S, {1, 2});
  a->Send(MsgType::kOtS2R, {3});
  EXPECT_EQ(b->Recv(MsgType::kOtR2S), (Bytes{1, 2}));
  EXPECT_EQ(b->Recv(MsgType::kOtS2R), (Bytes{3}));
  EXPECT_EQ(a->stats().bytes_sent, 5u + 2 + 5 + 1);
  EXPECT_EQ(b->stats().bytes_received, a->stats().bytes_sent);
  EXPECT_EQ(a->stats().frames_sent(MsgType::kOtR2S), 1u);
  EXPECT_EQ(b->stats().frames_received(MsgType::kOtS2R), 1u);
  EXPECT_EQ(b->stats().total_frames_received(), 2u);
  EXPECT_EQ(a->stats().bytes_sent_of(MsgType::kOtR2S), 7u);
  EXPECT_EQ(b->stats().bytes_received_of(MsgType::kOtS2R), 6u);
  auto before = a->stats();
  a->Send(MsgType::kRho2, {});
  auto d = a->stats() - before;
  EXPECT_EQ(d.bytes_sent_of(MsgType::kRho2), 5u);
  EXPECT_EQ(d.bytes_sent_of(MsgType::kOtR2S), 0u);
}

TEST(MemoryChannelTest, TypeMismatchAborts) {
  auto [a, b] = OpenMemoryPair();
  a->Send(MsgType::kRho2, {});
  EXPECT_THROW(b->Recv(MsgType::kMaskedVec), ProtocolAbort);
}

TEST(MemoryChannelTest, CloseWakesReceiver) {
  auto [a, b] = OpenMemoryPair();
  std::thread t([&] { a->Close(); });
  EXPECT_THROW(b->Recv(), TransportError);
  t.join();
}

TEST(TcpChannelTest, MegabyteRoundTrip) {
  auto [a, b] = OpenPair(ChannelSpec::Tcp("127.0.0.1", 0));
  Bytes payload = RandomPayload(1 << 20, 2);
  std::thread t([&, &b = b] {
    Frame f = b->Recv();
    b->Send(std::move(f));
  });
  a->Send(MsgType::kShareVec, payload);
  Frame back = a->Recv();
  t.join();
  EXPECT_EQ(back.type, MsgType::kShareVec);
  EXPECT_EQ(back.payload, payload);
}

TEST(TcpChannelTest, EchoTenThousandFrames) {
  constexpr int kFrames = 10000;
  auto [a, b] = OpenPair(ChannelSpec::Tcp("127.0.0.1", 0));
  std::thread echo([&, &b = b] {
    for (int i = 0; i < kFrames; ++i) b->Send(b->Recv());
  });
  std::vector<Frame> sent;
  for (int i = 0; i < kFrames; ++i) {
    sent.push_back({static_cast<MsgType>(1 + i % 10),
                    RandomPayload(static_cast<size_t>(i % 97), i)});
  }
  std::thread writer([&, &a = a] {
    for (const auto& f : sent) a->Send(f);
  });
  bool all_equal = true;
  for (int i = 0; i < kFrames; ++i) {
    all_equal &= (a->Recv() == sent[i]);
  }
  writer.join();
  echo.join();
  EXPECT_TRUE(all_equal);
  EXPECT_EQ(a->stats().bytes_sent, b->stats().bytes_received);
  EXPECT_EQ(a->stats().bytes_received, b->stats().bytes_sent);
}

TEST(TcpChannelTest, PeerCloseIsTransportError) {
  auto [a, b] = OpenPair(ChannelSpec::Tcp("127.0.0.1", 0));
  b.reset();
  EXPECT_THROW(a->Recv(), TransportError);
}

TEST(AddressTest, Parse) {
  EXPECT_EQ(ParseAddress("127.0.0.1:9000"),
            (std::pair<std::string, uint16_t>{"127.0.0.1", 9000}));
  EXPECT_THROW(ParseAddress("localhost"), InvalidArgument);
  EXPECT_THROW(ParseAddress("h:70000"), InvalidArgument);
  EXPECT_THROW(ParseAddress("h:12x"), InvalidArgument);
}

TEST(ThrottleTest, OneMebibyteAtEightMegabitTakesOneSecond) {
  auto [a, b] = OpenPair(ChannelSpec::Throttled(8e6));
  Bytes payload(1 << 20, 0x5a);
  const auto start = std::chrono::steady_clock::now();
  a->Send(MsgType::kMaskedVec, payload);
  b->Recv(MsgType::kMaskedVec);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  EXPECT_GE(elapsed, 1.0);
  EXPECT_LT(elapsed, 1.5);
}

TEST(ThrottleTest, SustainedRateStaysUnderBound) {
  constexpr double kRate = 16e6;
  auto [a, b] = OpenPair(ChannelSpec::Throttled(kRate));
  Bytes chunk(16 << 10, 1);
  constexpr int kChunks = 160;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < kChunks; ++i) a->Send(MsgType::kMaskedVec, chunk);
  for (int i = 0; i < kChunks; ++i) b->Recv();
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  ASSERT_GE(elapsed, 1.0);
  const double bits = static_cast<double>(a->stats().bytes_sent) * 8;
  EXPECT_LE(bits / elapsed, kRate * 1.05);
}

TEST(TokenBucketTest, DebtIsRepaid) {
  TokenBucket bucket(1e6, 1000);
  const auto start = std::chrono::steady_clock::now();
  bucket.Consume(201000);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  EXPECT_GE(elapsed, 0.2);
}

}  // namespace
}  // namespace psa::net
