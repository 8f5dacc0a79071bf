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

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "gtest/gtest.h"
#include "psa/align/protocol.h"
#include "psa/base/exception.h"

namespace psa::align {
namespace {

Dataset Make(std::vector<std::pair<std::string, std::string>> rows) {
  std::vector<Record> recs;
  for (auto& [id, hex] : rows) recs.push_back({id, FromHex(hex)});
  const size_t w = recs.empty() ? 2 : recs[0].attr.size();
  return Dataset(std::move(recs), w);
}

Block B(uint64_t v) { return Block{v, ~v}; }

ProtocolConfig TestConfig(const char* seed) {
  ProtocolConfig cfg;
  cfg.dealer_seed = SeedFromString(seed);
  return cfg;
}

TEST(DatasetTest, CsvRoundTripAndValidation) {
  Dataset d = Make({{"a", "0102"}, {"b", "0304"}});
  Dataset back = ParseDatasetCsv(DatasetToCsv(d));
  EXPECT_EQ(back.size(), 2u);
  EXPECT_EQ(back.attr_width(), 2u);
  EXPECT_EQ(back[1].attr, (Bytes{3, 4}));
  EXPECT_THROW(ParseDatasetCsv("id,attr_hex\na,01\na,02\n"), InvalidArgument);
  EXPECT_THROW(ParseDatasetCsv("id,attr_hex\na,01\nb,0202\n"),
               InvalidArgument);
  EXPECT_THROW(ParseDatasetCsv("id,attr\na,01\n"), InvalidArgument);
  EXPECT_THROW(ParseDatasetCsv("id,attr_hex\na,0g\n"), InvalidArgument);
  EXPECT_THROW(Make({{std::string(65, 'x'), "00"}}), InvalidArgument);
  EXPECT_TRUE(ParseDatasetCsv("id,attr_hex\n").empty());
}

TEST(DatasetTest, GeneratorOverlap) {
  RandomSource rng(SeedFromString("gen"));
  auto [a, b] = GenerateDatasets(8, 8, 0.5, 4, rng);
  EXPECT_EQ(PlainInnerJoin(a, b).size(), 4u);
  auto [c, d] = GenerateDatasets(8, 8, 0.0, 4, rng);
  EXPECT_TRUE(PlainInnerJoin(c, d).empty());
  auto [e, f] = GenerateDatasets(10, 10, 1.0, 4, rng);
  EXPECT_EQ(PlainInnerJoin(e, f).size(), 10u);
  auto [g, h] = GenerateDatasets(100, 37, 0.3, 4, rng);
  EXPECT_EQ(PlainInnerJoin(g, h).size(), 11u);
}

TEST(IndexVectorsTest, WorkedExample) {
  RandomSource rng(SeedFromString("iv"));
  // x = [p, q, r], y = [s, q, p].
  std::vector<Block> x = {B(1), B(2), B(3)}, y = {B(9), B(2), B(1)};
  auto iv = ComputeIndexVectors(x, y, rng);
  ASSERT_EQ(iv.c(), 2u);
  std::set<std::pair<Index, Index>> pairs;
  for (size_t i = 0; i < iv.c(); ++i) pairs.insert({iv.j[i], iv.k[i]});
  EXPECT_EQ(pairs, (std::set<std::pair<Index, Index>>{{2, 0}, {1, 1}}));
}

TEST(IndexVectorsTest, DisjointAndFull) {
  RandomSource rng(SeedFromString("iv2"));
  std::vector<Block> x = {B(1), B(2)}, y = {B(3), B(4)};
  EXPECT_EQ(ComputeIndexVectors(x, y, rng).c(), 0u);
  std::vector<Block> same;
  for (uint64_t i = 0; i < 50; ++i) same.push_back(B(i));
  auto iv = ComputeIndexVectors(same, same, rng);
  ASSERT_EQ(iv.c(), 50u);
  EXPECT_NO_THROW(Permutation(iv.k));
  for (size_t i = 0; i < 50; ++i) EXPECT_EQ(iv.j[i], iv.k[i]);
  std::vector<Block> dup = {B(5), B(5)};
  EXPECT_THROW(ComputeIndexVectors(dup, y, rng), ProtocolAbort);
  EXPECT_THROW(ComputeIndexVectors(y, dup, rng), ProtocolAbort);
}

TEST(PlainJoinTest, Examples) {
  Dataset x = Make({{"a", "01"}, {"b", "02"}, {"c", "03"}});
  Dataset y = Make({{"b", "12"}, {"c", "13"}, {"d", "14"}});
  auto rows = PlainInnerJoin(x, y);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (JoinRow{"b", {0x02}, {0x12}}));
  EXPECT_EQ(rows[1], (JoinRow{"c", {0x03}, {0x13}}));
  EXPECT_EQ(PlainInnerJoin(x, Make({{"z", "00"}})).size(), 0u);
  EXPECT_EQ(PlainInnerJoin(x, x).size(), 3u);
}

TEST(SharesCsvTest, RoundTrip) {
  RandomSource rng(SeedFromString("csv"));
  JoinedShares s{ShareVector(3, 4), ShareVector(5, 4)};
  rng.Fill(s.u.mutable_data());
  rng.Fill(s.v.mutable_data());
  EXPECT_EQ(ParseSharesCsv(SharesToCsv(s)), s);
  EXPECT_THROW(ParseSharesCsv("row,u_share_hex,v_share_hex\n1,00,00\n"),
               InvalidArgument);
}

TEST(Level1Test, ThreeRecordExample) {
  Dataset x = Make({{"a", "a0a0"}, {"b", "b0b0"}, {"c", "c0c0"}});
  Dataset y = Make({{"b", "0b0b0b"}, {"c", "0c0c0c"}, {"d", "0d0d0d"}});
  RandomSource rng(SeedFromString("l1-abc"));
  auto res =
      RunLevel1(x, y, TestConfig("dealer"), net::ChannelSpec::Memory(), rng);
  EXPECT_TRUE(MatchesJoin(RevealJoin(res.p1.shares, res.p2.shares),
                          PlainInnerJoin(x, y)));
  std::set<std::string> ids(res.p1.intersection.begin(),
                            res.p1.intersection.end());
  EXPECT_EQ(ids, (std::set<std::string>{"b", "c"}));
  EXPECT_TRUE(res.p2.intersection.empty());
  EXPECT_EQ(res.p1.report.c, 2u);
  EXPECT_EQ(res.p2.report.c, 2u);
  // Intersection rows line up with share rows.
  auto revealed = RevealJoin(res.p1.shares, res.p2.shares);
  for (size_t i = 0; i < revealed.size(); ++i) {
    const std::string& id = res.p1.intersection[i];
    const Bytes want = id == "b" ? Bytes{0xb0, 0xb0} : Bytes{0xc0, 0xc0};
    EXPECT_EQ(revealed[i].u, want);
  }
}

TEST(Level1Test, DisjointAndIdentical) {
  RandomSource rng(SeedFromString("l1-edge"));
  auto [a, b] = GenerateDatasets(20, 30, 0.0, 8, rng);
  auto res = RunLevel1(a, b, TestConfig("d"), net::ChannelSpec::Memory(), rng);
  EXPECT_EQ(res.p1.report.c, 0u);
  EXPECT_EQ(res.p2.report.c, 0u);
  EXPECT_TRUE(res.p1.intersection.empty());

  auto [c, d] = GenerateDatasets(64, 64, 1.0, 16, rng);
  res = RunLevel1(c, d, TestConfig("d"), net::ChannelSpec::Memory(), rng);
  EXPECT_TRUE(MatchesJoin(RevealJoin(res.p1.shares, res.p2.shares),
                          PlainInnerJoin(c, d)));
  EXPECT_EQ(res.p1.report.c, 64u);
}

TEST(Level1Test, P2ReceivesNoIdentifiers) {
  RandomSource rng(SeedFromString("l1-scope"));
  auto [a, b] = GenerateDatasets(40, 40, 0.5, 4, rng);
  auto res = RunLevel1(a, b, TestConfig("d"), net::ChannelSpec::Memory(), rng);
  const auto& st = res.p2.report.stats;
  using net::MsgType;
  uint64_t allowed = st.frames_received(MsgType::kOprfRAndAPrime) +
                     st.frames_received(MsgType::kOtR2S) +
                     st.frames_received(MsgType::kOtS2R) +
                     st.frames_received(MsgType::kRho2) +
                     st.frames_received(MsgType::kShareVec);
  EXPECT_EQ(allowed, st.total_frames_received());
  EXPECT_EQ(st.frames_received(MsgType::kShareVec), 1u);
  EXPECT_EQ(st.frames_received(MsgType::kPrfVec), 0u);
}

TEST(Level1Test, GroupOtAndWideAttributes) {
  RandomSource rng(SeedFromString("l1-group"));
  auto [a, b] = GenerateDatasets(30, 25, 0.4, 40, rng);
  auto cfg = TestConfig("d");
  cfg.ot_mode = ot::OtMode::kGroup;
  auto res = RunLevel1(a, b, cfg, net::ChannelSpec::Memory(), rng);
  EXPECT_TRUE(MatchesJoin(RevealJoin(res.p1.shares, res.p2.shares),
                          PlainInnerJoin(a, b)));
}

TEST(Level1Test, DealerModeIsDeterministicUnderSeed) {
  auto run = [] {
    RandomSource rng(SeedFromString("fixed"));
    auto [a, b] = GenerateDatasets(50, 50, 0.5, 8, rng);
    return RunLevel1(a, b, TestConfig("d"), net::ChannelSpec::Memory(), rng);
  };
  auto r1 = run(), r2 = run();
  EXPECT_EQ(r1.p1.shares, r2.p1.shares);
  EXPECT_EQ(r1.p2.shares, r2.p2.shares);
}

TEST(Level2Test, ThreeRecordExample) {
  Dataset x = Make({{"a", "a0"}, {"b", "b0"}, {"c", "c0"}});
  Dataset y = Make({{"b", "0b"}, {"c", "0c"}, {"d", "0d"}});
  RandomSource rng(SeedFromString("l2-abc"));
  auto res =
      RunLevel2(x, y, TestConfig("dealer"), net::ChannelSpec::Memory(), rng);
  EXPECT_TRUE(MatchesJoin(RevealJoin(res.p1.shares, res.p2.shares),
                          PlainInnerJoin(x, y)));
  EXPECT_EQ(res.server.report.c, 2u);
  EXPECT_EQ(res.server.report.n, 3u);
  EXPECT_EQ(res.server.report.m, 3u);
  EXPECT_TRUE(res.p1.intersection.empty());
}

TEST(Level2Test, EmptyIntersection) {
  RandomSource rng(SeedFromString("l2-empty"));
  auto [a, b] = GenerateDatasets(16, 16, 0.0, 4, rng);
  auto res = RunLevel2(a, b, TestConfig("d"), net::ChannelSpec::Memory(), rng);
  EXPECT_EQ(res.server.report.c, 0u);
  EXPECT_EQ(res.p1.shares.size(), 0u);
  EXPECT_EQ(res.p2.shares.size(), 0u);
}

TEST(Level2Test, LargerInstanceBothSchedules) {
  RandomSource rng(SeedFromString("l2-1024"));
  auto [a, b] = GenerateDatasets(1024, 1024, 0.5, 16, rng);
  const auto want = PlainInnerJoin(a, b);
  for (bool concurrent : {false, true}) {
    auto cfg = TestConfig("d");
    cfg.concurrent = concurrent;
    auto res = RunLevel2(a, b, cfg, net::ChannelSpec::Memory(), rng);
    EXPECT_EQ(res.server.report.c, 512u);
    EXPECT_TRUE(MatchesJoin(RevealJoin(res.p1.shares, res.p2.shares), want));
  }
}

TEST(Level2Test, ServerTranscriptScope) {
  RandomSource rng(SeedFromString("l2-scope"));
  auto [a, b] = GenerateDatasets(40, 30, 0.5, 4, rng);
  auto res = RunLevel2(a, b, TestConfig("d"), net::ChannelSpec::Memory(), rng);
  const auto& st = res.server.report.stats;
  using net::MsgType;
  EXPECT_EQ(st.frames_received(MsgType::kPrfVec), 2u);
  EXPECT_EQ(st.frames_received(MsgType::kKeyExchange), 0u);
  EXPECT_EQ(st.frames_received(MsgType::kOprfRAndAPrime), 0u);
  EXPECT_EQ(st.frames_received(MsgType::kShareVec), 0u);
  EXPECT_EQ(st.frames_sent(MsgType::kShareVec), 2u);
}

TEST(Level2Test, TcpChannels) {
  RandomSource rng(SeedFromString("l2-tcp"));
  auto [a, b] = GenerateDatasets(60, 50, 0.5, 8, rng);
  auto res = RunLevel2(a, b, TestConfig("d"),
                       net::ChannelSpec::Tcp("127.0.0.1", 0), rng);
  EXPECT_TRUE(MatchesJoin(RevealJoin(res.p1.shares, res.p2.shares),
                          PlainInnerJoin(a, b)));
}

TEST(Level2Test, KeyAgreementMatches) {
  auto [a, b] = net::OpenMemoryPair();
  RandomSource r1(SeedFromString("k1")), r2(SeedFromString("k2"));
  PrfKey k1, k2;
  std::thread t([&, &b = b] { k2 = AgreeKey(Owner::kP2, *b, r2); });
  k1 = AgreeKey(Owner::kP1, *a, r1);
  t.join();
  EXPECT_EQ(k1, k2);
  EXPECT_NE(k1, PrfKey{});
}

TEST(OutputOrderTest, JoinedRowPositionIsUniform) {
  RandomSource rng(SeedFromString("order"));
  auto [a, b] = GenerateDatasets(12, 12, 0.5, 2, rng);
  const auto want = PlainInnerJoin(a, b);
  const size_t c = want.size();
  ASSERT_EQ(c, 6u);
  const std::string target = want[0].id;
  std::vector<int> hist(c, 0);
  constexpr int kRuns = 300;
  for (int t = 0; t < kRuns; ++t) {
    auto res = RunLevel1(a, b, TestConfig("d"), net::ChannelSpec::Memory(),
                         rng);
    auto it = std::find(res.p1.intersection.begin(),
                        res.p1.intersection.end(), target);
    ASSERT_NE(it, res.p1.intersection.end());
    hist[it - res.p1.intersection.begin()]++;
  }
  const double expect = static_cast<double>(kRuns) / c;
  const double sigma = std::sqrt(kRuns * (1.0 / c) * (1 - 1.0 / c));
  for (int h : hist) EXPECT_LE(std::abs(h - expect), 3 * sigma) << h;
}

}  // namespace
}  // namespace psa::align
