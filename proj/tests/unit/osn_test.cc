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

#include <cmath>
#include <cstring>

#include "gtest/gtest.h"
#include "psa/base/counters.h"
#include "psa/benes/looping.h"
#include "psa/osn/labels.h"
#include "psa/osn/mosn.h"
#include "test_util.h"

namespace psa::osn {
namespace {

using benes::Topology;

TEST(WireLabelsTest, SmallestNetwork) {
  RandomSource rng(SeedFromString("labels-2"));
  auto labels = SenderLabels(Topology::Build(2), 16, rng);
  EXPECT_EQ(labels.cols(), 1u);
  EXPECT_NE(Bytes(labels.A(0, 0).begin(), labels.A(0, 0).end()),
            Bytes(labels.B(0, 0).begin(), labels.B(0, 0).end()));
}

// Walks every hardwired link and every pass-through slot.
void CheckLabelInvariants(const WireLabels& labels) {
  const auto& topo = labels.topology();
  auto eq = [](ByteSpan x, ByteSpan y) {
    return std::equal(x.begin(), x.end(), y.begin(), y.end());
  };
  for (size_t c = 1; c < topo.cols(); ++c) {
    auto link = topo.links(c);
    for (size_t q = 0; q < topo.n_inputs(); ++q) {
      ASSERT_TRUE(eq(labels.A(c, link[q]), labels.B(c - 1, q)));
    }
  }
  for (size_t c = 0; c < topo.cols(); ++c) {
    for (size_t p = 0; p < topo.n_inputs(); ++p) {
      if (!labels.OnGate(c, p)) {
        ASSERT_TRUE(eq(labels.A(c, p), labels.B(c, p)));
      }
    }
  }
}

TEST(WireLabelsTest, HardwireEqualities) {
  RandomSource rng(SeedFromString("labels-8"));
  for (size_t m : {8, 9, 13}) {
    CheckLabelInvariants(SenderLabels(Topology::Build(m), 16, rng));
  }
}

TEST(WireLabelsTest, SeedDeterminism) {
  RandomSource r1(SeedFromString("same")), r2(SeedFromString("same"));
  auto topo = Topology::Build(16);
  auto l1 = SenderLabels(topo, 16, r1), l2 = SenderLabels(topo, 16, r2);
  for (size_t c = 0; c < topo->cols(); ++c) {
    for (size_t p = 0; p < 16; ++p) {
      ASSERT_TRUE(std::ranges::equal(l1.B(c, p), l2.B(c, p)));
    }
  }
}

TEST(GateMessagesTest, AlgebraicIdentities) {
  auto topo = Topology::Build(4);
  WireLabels zero(topo, 16);
  Bytes m0(32), m1(32);
  SenderGateMessages(zero, {0, 0}, m0, m1);
  EXPECT_EQ(m0, Bytes(32, 0));
  EXPECT_EQ(m1, Bytes(32, 0));

  RandomSource rng(SeedFromString("gate-msg"));
  WireLabels same(topo, 16);
  rng.Fill(same.A(0, 0));
  rng.Fill(same.A(0, 1));
  std::ranges::copy(same.A(0, 0), same.B(0, 0).begin());
  std::ranges::copy(same.A(0, 1), same.B(0, 1).begin());
  SenderGateMessages(same, {0, 0}, m0, m1);
  EXPECT_EQ(m0, Bytes(32, 0));
  Bytes d(16);
  XorTo(d, same.A(0, 0), same.A(0, 1));
  EXPECT_TRUE(std::equal(d.begin(), d.end(), m1.begin()));
  EXPECT_TRUE(std::equal(d.begin(), d.end(), m1.begin() + 16));

  auto labels = SenderLabels(topo, 16, rng);
  for (const auto& g : topo->used_gates()) {
    SenderGateMessages(labels, g, m0, m1);
    Bytes x(32), want(32);
    XorTo(x, m0, m1);
    XorTo(MutableByteSpan(want).first(16), labels.B(g.col, 2 * g.row),
          labels.B(g.col, 2 * g.row + 1));
    std::copy(want.begin(), want.begin() + 16, want.begin() + 16);
    EXPECT_EQ(x, want);
  }
  EXPECT_THROW(SenderGateMessages(labels, {0, 7}, m0, m1), InvalidArgument);
}

// Holds both sides: plays the OT in the clear and checks the unmasked output.
void CheckEvaluate(size_t m, RandomSource& rng) {
  const size_t w = 16;
  auto topo = Topology::Build(m);
  auto rho1 = RandomPermutation(m, rng);
  auto prog = benes::Program(topo, rho1);
  auto labels = SenderLabels(topo, w, rng);
  auto msgs = SenderAllGateMessages(labels);
  auto choice = prog.ChoiceBits();
  Bytes ot_out(msgs.count() * 2 * w);
  for (size_t i = 0; i < msgs.count(); ++i) {
    auto src = choice[i] ? msgs.m1(i) : msgs.m0(i);
    std::ranges::copy(src, ot_out.begin() + i * 2 * w);
  }
  Bytes u = rng.NextBytes(m * w);
  Bytes masked = u;
  for (size_t j = 0; j < m; ++j) {
    XorInto({masked.data() + j * w, w}, labels.A(0, j));
  }
  Bytes out = ReceiverEvaluate(prog, ot_out, masked, w);
  for (size_t j = 0; j < m; ++j) {
    Bytes got(out.begin() + j * w, out.begin() + (j + 1) * w);
    XorInto(got, labels.B(labels.last_col(), j));
    ASSERT_TRUE(std::equal(got.begin(), got.end(), u.begin() + rho1[j] * w))
        << "m=" << m << " j=" << j;
  }
}

TEST(ReceiverEvaluateTest, ZeroLabelsMatchPlainEvaluation) {
  auto topo = Topology::Build(4);
  auto prog = benes::Program(topo, Permutation::Identity(4));
  WireLabels zero(topo, 16);
  Bytes ot_out(topo->used_gate_count() * 32, 0);
  RandomSource rng(SeedFromString("zero-eval"));
  Bytes u = rng.NextBytes(64);
  std::vector<Bytes> rows;
  for (size_t j = 0; j < 4; ++j) {
    rows.emplace_back(u.begin() + 16 * j, u.begin() + 16 * (j + 1));
  }
  auto plain = benes::EvalPlain(prog, rows);
  Bytes out = ReceiverEvaluate(prog, ot_out, u, 16);
  for (size_t j = 0; j < 4; ++j) {
    EXPECT_TRUE(std::equal(plain[j].begin(), plain[j].end(),
                           out.begin() + 16 * j));
  }
}

TEST(ReceiverEvaluateTest, UnmaskedOutputIsPermutedInput) {
  RandomSource rng(SeedFromString("eval"));
  for (size_t m = 2; m <= 64; ++m) CheckEvaluate(m, rng);
}

struct MosnRun {
  ShareVector recv_share;
  ShareVector send_share;
  size_t ot_instances = 0;
  net::ChannelStats offline_stats;
  net::ChannelStats online_stats;
};

MosnRun RunMosn(const MosnConfig& cfg, const Injection& pi,
                const ShareVector& u, ot::OtMode mode, RandomSource& rng) {
  auto [rc, sc] = net::OpenMemoryPair();
  const Seed dealer = rng.NextSeed();
  auto make_ot = [&](const char* side) {
    return mode == ot::OtMode::kGroup ? ot::MakeGroupOt(rng.Derive(side))
                                      : ot::MakeDealerOt(dealer, "mosn");
  };
  auto rot = make_ot("r");
  auto sot = make_ot("s");
  RandomSource rrng = rng.Derive("recv"), srng = rng.Derive("send");
  MosnRun run;
  MosnReceiverOffline roff;
  MosnSenderOffline soff;
  testing::RunTwoParties(
      *rc, *sc,
      [&](net::Endpoint& ch) {
        roff = MosnOfflineReceiver(cfg, *rot, ch, rrng);
      },
      [&](net::Endpoint& ch) {
        soff = MosnOfflineSender(cfg, *sot, ch, srng);
      });
  run.ot_instances = roff.ot_instances();
  EXPECT_EQ(soff.ot_instances(), roff.ot_instances());
  run.offline_stats = sc->stats();
  testing::RunTwoParties(
      *rc, *sc,
      [&](net::Endpoint& ch) {
        run.recv_share = MosnOnlineReceiver(roff, pi, ch);
      },
      [&](net::Endpoint& ch) {
        run.send_share = MosnOnlineSender(soff, u, ch);
      });
  run.online_stats = sc->stats() - run.offline_stats;
  return run;
}

void ExpectSharesSelect(const MosnRun& run, const Injection& pi,
                        const ShareVector& u) {
  ShareVector joined = Reveal(run.recv_share, run.send_share);
  ASSERT_EQ(joined.size(), pi.domain_size());
  for (size_t i = 0; i < pi.domain_size(); ++i) {
    ASSERT_TRUE(std::ranges::equal(joined.Row(i), u.Row(pi[i]))) << i;
  }
}

ShareVector RandomVector(size_t rows, size_t width, RandomSource& rng) {
  ShareVector v(width, rows);
  rng.Fill(v.mutable_data());
  return v;
}

TEST(MosnTest, IdentityInjection) {
  RandomSource rng(SeedFromString("mosn-id"));
  MosnConfig cfg{16, 16, 128};
  auto u = RandomVector(16, 16, rng);
  Injection pi(Permutation::Identity(16).map(), 16);
  auto run = RunMosn(cfg, pi, u, ot::OtMode::kDealer, rng);
  ExpectSharesSelect(run, pi, u);
}

TEST(MosnTest, WorkedInjection) {
  RandomSource rng(SeedFromString("mosn-worked"));
  MosnConfig cfg{4, 16, 128};
  auto u = RandomVector(4, 16, rng);
  Injection pi({3, 0}, 4);
  for (auto mode : {ot::OtMode::kDealer, ot::OtMode::kGroup}) {
    auto run = RunMosn(cfg, pi, u, mode, rng);
    ExpectSharesSelect(run, pi, u);
  }
}

TEST(MosnTest, OtCountsFollowTopology) {
  RandomSource rng(SeedFromString("mosn-count"));
  for (size_t m : {2, 8, 9}) {
    MosnConfig cfg{m, 16, 128};
    auto u = RandomVector(m, 16, rng);
    Injection pi({0}, m);
    auto run = RunMosn(cfg, pi, u, ot::OtMode::kDealer, rng);
    EXPECT_EQ(run.ot_instances, Topology::Build(m)->used_gate_count());
    if (m == 2) EXPECT_EQ(run.ot_instances, 1u);
    if (m == 8) EXPECT_EQ(run.ot_instances, 20u);
    if (m == 9) EXPECT_LT(run.ot_instances, 28u);
  }
}

TEST(MosnTest, RandomInstancesBothModes) {
  RandomSource rng(SeedFromString("mosn-random"));
  for (int t = 0; t < 40; ++t) {
    const size_t m = 1 + rng.Uniform(t < 30 ? 256 : 40);
    const size_t c = rng.Uniform(m + 1);
    const size_t width = 1 + rng.Uniform(40);
    auto full = RandomPermutation(m, rng).map();
    full.resize(c);
    Injection pi(full, m);
    auto u = RandomVector(m, width, rng);
    MosnConfig cfg{m, width, 128};
    auto mode = t % 4 == 0 ? ot::OtMode::kGroup : ot::OtMode::kDealer;
    auto run = RunMosn(cfg, pi, u, mode, rng);
    ExpectSharesSelect(run, pi, u);
  }
}

TEST(MosnTest, NarrowLanes) {
  RandomSource rng(SeedFromString("mosn-lanes"));
  MosnConfig cfg{33, 10, 32};
  EXPECT_EQ(cfg.lanes(), 3u);
  EXPECT_EQ(cfg.label_width(), 12u);
  auto u = RandomVector(33, 10, rng);
  Injection pi({5, 32, 0, 17}, 33);
  auto run = RunMosn(cfg, pi, u, ot::OtMode::kDealer, rng);
  ExpectSharesSelect(run, pi, u);
}

TEST(MosnTest, EmptyVector) {
  RandomSource rng(SeedFromString("mosn-empty"));
  MosnConfig cfg{0, 16, 128};
  auto run = RunMosn(cfg, Injection({}, 0), ShareVector(16, 0),
                     ot::OtMode::kDealer, rng);
  EXPECT_EQ(run.recv_share.size(), 0u);
  EXPECT_EQ(run.online_stats.bytes_sent, 0u);
}

TEST(MosnTest, OnlinePhaseDoesNoOfflineWork) {
  RandomSource rng(SeedFromString("mosn-online"));
  const size_t m = 512;
  MosnConfig cfg{m, 16, 128};
  auto u = RandomVector(m, 16, rng);
  Injection pi(RandomPermutation(m, rng).map(), m);
  auto [rc, sc] = net::OpenMemoryPair();
  auto rot = ot::MakeDealerOt(SeedFromString("d"), "s");
  auto sot = ot::MakeDealerOt(SeedFromString("d"), "s");
  MosnReceiverOffline roff;
  MosnSenderOffline soff;
  testing::RunTwoParties(
      *rc, *sc,
      [&](net::Endpoint& ch) {
        roff = MosnOfflineReceiver(cfg, *rot, ch, rng);
      },
      [&](net::Endpoint& ch) {
        RandomSource s(SeedFromString("sender"));
        soff = MosnOfflineSender(cfg, *sot, ch, s);
      });
  auto& counters = GlobalWorkCounters();
  const uint64_t loops = counters.looping_calls;
  const uint64_t gens = counters.label_generations;
  ShareVector a, b;
  testing::RunTwoParties(
      *rc, *sc,
      [&](net::Endpoint& ch) { a = MosnOnlineReceiver(roff, pi, ch); },
      [&](net::Endpoint& ch) { b = MosnOnlineSender(soff, u, ch); });
  EXPECT_EQ(counters.looping_calls, loops);
  EXPECT_EQ(counters.label_generations, gens);
  EXPECT_EQ(sc->stats().frames_received(net::MsgType::kRho2), 1u);
  // Offline state is single-use.
  EXPECT_THROW(MosnOnlineReceiver(roff, pi, *rc), InvalidArgument);
  EXPECT_THROW(MosnOnlineSender(soff, u, *sc), InvalidArgument);
}

TEST(MosnTest, Rho2FirstEntryIsUniform) {
  // Fixed pi, fresh rho1 per session: the sender-visible rho2(0) should be
  // uniform over [m].
  RandomSource rng(SeedFromString("rho2-uniform"));
  const size_t m = 8;
  const int kRuns = 800;
  Injection pi({3, 5}, m);
  std::vector<int> hist(m, 0);
  for (int t = 0; t < kRuns; ++t) {
    auto rho1 = RandomPermutation(m, rng);
    hist[ComposeRho2(pi, rho1)[0]]++;
  }
  double chi2 = 0;
  const double expect = static_cast<double>(kRuns) / m;
  for (int h : hist) chi2 += (h - expect) * (h - expect) / expect;
  // 7 degrees of freedom, p = 0.001.
  EXPECT_LT(chi2, 24.32);
}

}  // namespace
}  // namespace psa::osn
