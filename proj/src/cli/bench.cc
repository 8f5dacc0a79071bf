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

#include "psa/cli/bench.h"

#include <algorithm>
#include <chrono>
#include <functional>
#include <mutex>
#include <thread>

#include "fmt/format.h"
#include "psa/align/protocol.h"
#include "psa/base/exception.h"
#include "psa/osn/mosn.h"

namespace psa::cli {
namespace {

using Clock = std::chrono::steady_clock;

double MsSince(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

net::ChannelSpec SpecFor(const BenchOptions& opts) {
  if (opts.bits_per_second > 0) {
    return net::ChannelSpec::Throttled(opts.bits_per_second);
  }
  return net::ChannelSpec::Memory();
}

std::unique_ptr<ot::OtProvider> MakeOt(const BenchOptions& opts,
                                       const std::string& session,
                                       RandomSource& rng) {
  if (opts.ot_mode == ot::OtMode::kGroup) {
    return ot::MakeGroupOt(RandomSource(rng.NextSeed()));
  }
  return ot::MakeDealerOt(opts.dealer_seed, session);
}

// Runs each closure on its own thread; if one throws, every endpoint is
// closed so the others unblock, and the first error is rethrown.
void RunAll(const std::vector<std::function<void()>>& fns,
            const std::vector<net::Endpoint*>& eps) {
  std::mutex mu;
  std::exception_ptr first;
  std::vector<std::thread> threads;
  for (const auto& f : fns) {
    threads.emplace_back([&, f] {
      try {
        f();
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first) first = std::current_exception();
        for (auto* ep : eps) ep->Close();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first) std::rethrow_exception(first);
}

}  // namespace

BenchTarget ParseBenchTarget(std::string_view name) {
  if (name == "osn") return BenchTarget::kOsn;
  if (name == "psi") return BenchTarget::kPsi;
  if (name == "psa") return BenchTarget::kPsa;
  PSA_THROW(InvalidArgument, "unknown bench target '{}'", name);
}

const char* BenchTargetName(BenchTarget t) {
  switch (t) {
    case BenchTarget::kOsn:
      return "osn";
    case BenchTarget::kPsi:
      return "psi";
    case BenchTarget::kPsa:
      return "psa";
  }
  return "?";
}

BenchRow BenchOsn(size_t m, const BenchOptions& opts, RandomSource& rng) {
  auto [recv_ep, send_ep] = net::OpenPair(SpecFor(opts));
  osn::MosnConfig cfg{m, opts.attr_width, opts.label_bits};
  Permutation pi = RandomPermutation(m, rng);
  Injection inj(pi.map(), m);
  ShareVector u(opts.attr_width, m);
  rng.Fill(u.mutable_data());
  RandomSource rr(rng.NextSeed()), rs(rng.NextSeed());
  auto ot_r = MakeOt(opts, "bench/osn", rng);
  auto ot_s = MakeOt(opts, "bench/osn", rng);

  BenchRow row;
  row.target = BenchTarget::kOsn;
  row.size = m;
  row.bits_per_second = opts.bits_per_second;
  row.c = m;
  double off_r = 0, on_r = 0, off_s = 0, on_s = 0;
  const auto t0 = Clock::now();
  RunAll(
      {[&] {
        auto t = Clock::now();
        auto st = osn::MosnOfflineReceiver(cfg, *ot_r, *recv_ep, rr);
        off_r = MsSince(t);
        row.ot_instances = st.ot_instances();
        t = Clock::now();
        osn::MosnOnlineReceiver(st, inj, *recv_ep);
        on_r = MsSince(t);
      },
      [&] {
        auto t = Clock::now();
        auto st = osn::MosnOfflineSender(cfg, *ot_s, *send_ep, rs);
        off_s = MsSince(t);
        t = Clock::now();
        osn::MosnOnlineSender(st, u, *send_ep);
        on_s = MsSince(t);
      }},
      {recv_ep.get(), send_ep.get()});
  row.wall_ms = MsSince(t0);
  row.offline_ms = std::max(off_r, off_s);
  row.online_ms = std::max(on_r, on_s);
  row.comm_bytes =
      recv_ep->stats().bytes_sent + send_ep->stats().bytes_sent;
  return row;
}

BenchRow BenchPsi(size_t n, const BenchOptions& opts, RandomSource& rng) {
  auto [p1, p2] = align::GenerateDatasets(n, n, opts.alpha, 1, rng);
  const auto spec = SpecFor(opts);
  auto [p1p2, p2p1] = net::OpenPair(spec);
  auto [p1s, sp1] = net::OpenPair(spec);
  auto [p2s, sp2] = net::OpenPair(spec);
  RandomSource r1(rng.NextSeed()), r2(rng.NextSeed()), rs(rng.NextSeed());

  auto owner = [](align::Owner who, const align::Dataset& d,
                  net::Endpoint& peer, net::Endpoint& server,
                  RandomSource& r) {
    MmoHash prf(align::AgreeKey(who, peer, r));
    std::vector<Block> tags(d.size());
    for (size_t i = 0; i < d.size(); ++i) tags[i] = prf(AsBytes(d[i].id));
    server.Send(net::MsgType::kPrfVec, align::EncodePrfVector(tags, 0));
  };

  BenchRow row;
  row.target = BenchTarget::kPsi;
  row.size = n;
  row.bits_per_second = opts.bits_per_second;
  const auto t0 = Clock::now();
  RunAll({[&] { owner(align::Owner::kP1, p1, *p1p2, *p1s, r1); },
          [&] { owner(align::Owner::kP2, p2, *p2p1, *p2s, r2); },
          [&] {
            Bytes a = sp1->Recv(net::MsgType::kPrfVec);
            Bytes b = sp2->Recv(net::MsgType::kPrfVec);
            size_t w = 0;
            auto x = align::DecodePrfVector(a, &w);
            auto y = align::DecodePrfVector(b, &w);
            row.c = align::ComputeIndexVectors(x, y, rs).c();
          }},
         {p1p2.get(), p2p1.get(), p1s.get(), sp1.get(), p2s.get(),
          sp2.get()});
  row.wall_ms = MsSince(t0);
  row.online_ms = row.wall_ms;
  for (auto* ep : {p1p2.get(), p2p1.get(), p1s.get(), p2s.get()}) {
    row.comm_bytes += ep->stats().bytes_sent;
  }
  return row;
}

BenchRow BenchPsa(size_t n, const BenchOptions& opts, RandomSource& rng) {
  auto [p1, p2] =
      align::GenerateDatasets(n, n, opts.alpha, opts.attr_width, rng);
  align::ProtocolConfig cfg;
  cfg.label_bits = opts.label_bits;
  cfg.ot_mode = opts.ot_mode;
  cfg.dealer_seed = opts.dealer_seed;
  cfg.session = "bench";
  const auto spec = SpecFor(opts);

  BenchRow row;
  row.target = BenchTarget::kPsa;
  row.size = n;
  row.bits_per_second = opts.bits_per_second;
  std::vector<const align::PartyReport*> reports;
  align::Level1Result l1;
  align::Level2Result l2;
  if (opts.level == 1) {
    l1 = align::RunLevel1(p1, p2, cfg, spec, rng);
    reports = {&l1.p1.report, &l1.p2.report};
    row.wall_ms = l1.wall_ms;
  } else {
    l2 = align::RunLevel2(p1, p2, cfg, spec, rng);
    reports = {&l2.p1.report, &l2.p2.report, &l2.server.report};
    row.wall_ms = l2.wall_ms;
  }
  for (const auto* r : reports) {
    row.c = r->c;
    row.offline_ms = std::max(row.offline_ms, r->offline_ms);
    row.online_ms = std::max(row.online_ms, r->online_ms);
    row.comm_bytes += r->stats.bytes_sent;
  }
  return row;
}

BenchRow RunBench(BenchTarget target, size_t size, const BenchOptions& opts,
                  RandomSource& rng) {
  switch (target) {
    case BenchTarget::kOsn:
      return BenchOsn(size, opts, rng);
    case BenchTarget::kPsi:
      return BenchPsi(size, opts, rng);
    case BenchTarget::kPsa:
      return BenchPsa(size, opts, rng);
  }
  PSA_THROW(InvalidArgument, "unknown bench target");
}

namespace {

std::string BandwidthLabel(double bps) {
  if (bps <= 0) return "unlimited";
  if (bps >= 1e9) return fmt::format("{:g}Gbit/s", bps / 1e9);
  return fmt::format("{:g}Mbit/s", bps / 1e6);
}

}  // namespace

std::string FormatBenchText(const std::vector<BenchRow>& rows) {
  std::string out = fmt::format("{:<6} {:>9} {:>12} {:>8} {:>12} {:>12} "
                                "{:>12} {:>12}\n",
                                "target", "size", "bandwidth", "c",
                                "offline_ms", "online_ms", "wall_ms",
                                "comm_MB");
  for (const auto& r : rows) {
    out += fmt::format("{:<6} {:>9} {:>12} {:>8} {:>12.1f} {:>12.1f} "
                       "{:>12.1f} {:>12.3f}\n",
                       BenchTargetName(r.target), r.size,
                       BandwidthLabel(r.bits_per_second), r.c, r.offline_ms,
                       r.online_ms, r.wall_ms, r.comm_mb());
  }
  return out;
}

std::string FormatBenchCsv(const std::vector<BenchRow>& rows) {
  std::string out =
      "target,size,bits_per_second,c,offline_ms,online_ms,wall_ms,"
      "comm_bytes,comm_mb,ot_instances\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{:.3f},{:.3f},{:.3f},{},{:.6f},{}\n",
                       BenchTargetName(r.target), r.size, r.bits_per_second,
                       r.c, r.offline_ms, r.online_ms, r.wall_ms,
                       r.comm_bytes, r.comm_mb(), r.ot_instances);
  }
  return out;
}

}  // namespace psa::cli
