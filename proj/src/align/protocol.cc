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

#include "psa/align/protocol.h"

#include <sodium.h>

#include <chrono>
#include <cstring>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "psa/base/exception.h"
#include "psa/crypto/prf.h"
#include "psa/oprf/oprf.h"
#include "psa/osn/mosn.h"
#include "spdlog/spdlog.h"

namespace psa::align {

namespace {

using Clock = std::chrono::steady_clock;

double MsSince(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::unique_ptr<ot::OtProvider> MakeOt(const ProtocolConfig& cfg,
                                       const std::string& session,
                                       RandomSource& rng) {
  if (cfg.ot_mode == ot::OtMode::kGroup) {
    return ot::MakeGroupOt(rng.Derive("ot/" + session));
  }
  PSA_ENFORCE(cfg.dealer_seed.has_value(),
              "dealer OT mode needs a dealer seed");
  return ot::MakeDealerOt(*cfg.dealer_seed, cfg.session + "/" + session);
}

// Applies one random permutation to the PRF list and the attribute rows.
void JointShuffle(std::vector<Block>& prf, ShareVector& attrs,
                  RandomSource& rng) {
  if (prf.size() < 2) return;
  auto sigma = RandomPermutation(prf.size(), rng);
  std::vector<Block> p(prf.size());
  ShareVector a(attrs.width(), prf.size());
  for (size_t i = 0; i < prf.size(); ++i) {
    p[i] = prf[sigma[i]];
    std::ranges::copy(attrs.Row(sigma[i]), a.MutableRow(i).begin());
  }
  prf.swap(p);
  attrs = std::move(a);
}

ShareVector SelectRows(const ShareVector& v, std::span<const Index> idx) {
  ShareVector out(v.width(), idx.size());
  for (size_t i = 0; i < idx.size(); ++i) {
    std::ranges::copy(v.Row(idx[i]), out.MutableRow(i).begin());
  }
  return out;
}

struct MosnTiming {
  double offline_ms = 0;
};

ShareVector MosnAsReceiver(const osn::MosnConfig& mc, const Injection& pi,
                           ot::OtProvider& ot, net::Endpoint& ch,
                           RandomSource& rng, MosnTiming& t) {
  const auto t0 = Clock::now();
  auto off = osn::MosnOfflineReceiver(mc, ot, ch, rng);
  t.offline_ms += MsSince(t0);
  return osn::MosnOnlineReceiver(off, pi, ch);
}

ShareVector MosnAsSender(const osn::MosnConfig& mc, const ShareVector& u,
                         ot::OtProvider& ot, net::Endpoint& ch,
                         RandomSource& rng, MosnTiming& t) {
  const auto t0 = Clock::now();
  auto off = osn::MosnOfflineSender(mc, ot, ch, rng);
  t.offline_ms += MsSince(t0);
  return osn::MosnOnlineSender(off, u, ch);
}

void Finish(PartyReport& r, Clock::time_point t0, double offline_ms,
            const net::ChannelStats& stats) {
  const double total = MsSince(t0);
  r.offline_ms = offline_ms;
  r.online_ms = total - offline_ms;
  r.stats = stats;
}

}  // namespace

Bytes EncodePrfVector(std::span<const Block> prf, size_t attr_width) {
  ByteWriter w;
  w.U32(static_cast<uint32_t>(prf.size()));
  w.U32(static_cast<uint32_t>(attr_width));
  for (const auto& b : prf) w.Raw(b.ToBytes());
  return w.Take();
}

std::vector<Block> DecodePrfVector(ByteSpan payload, size_t* attr_width) {
  ByteReader rd(payload);
  const uint32_t n = rd.U32();
  *attr_width = rd.U32();
  if (rd.remaining() != 16ull * n) {
    PSA_THROW(ProtocolAbort, "PRF vector of {} entries has {} bytes", n,
              rd.remaining());
  }
  std::vector<Block> v(n);
  for (auto& b : v) b = Block::FromBytes(rd.Raw(16));
  return v;
}

Bytes EncodeShareVector(const ShareVector& v) {
  ByteWriter w;
  w.U32(static_cast<uint32_t>(v.size()));
  w.U32(static_cast<uint32_t>(v.width()));
  w.Raw(v.data());
  return w.Take();
}

ShareVector DecodeShareVector(ByteSpan payload) {
  ByteReader rd(payload);
  const uint32_t rows = rd.U32();
  const uint32_t width = rd.U32();
  if (rd.remaining() != static_cast<uint64_t>(rows) * width) {
    PSA_THROW(ProtocolAbort, "share vector {}x{} has {} bytes", rows, width,
              rd.remaining());
  }
  ShareVector v(width, rows);
  if (rows > 0 && width > 0) {
    std::ranges::copy(rd.Raw(rd.remaining()), v.mutable_data().begin());
  }
  return v;
}

PartyOutput RunLevel1P1(const Dataset& data, net::Endpoint& p2,
                        const ProtocolConfig& cfg, RandomSource& rng) {
  PSA_ENFORCE(cfg.dealer_seed.has_value(),
              "level 1 needs a dealer seed for the VOLE correlation");
  const auto t0 = Clock::now();
  const auto before = p2.stats();
  PartyOutput out;
  out.report.n = data.size();

  const auto ids = data.IdBytes();
  oprf::Dealer dealer(*cfg.dealer_seed);
  oprf::OprfOptions oo{cfg.okvs, cfg.session + "/oprf"};
  const auto x_prf = oprf::OprfRunP1(ids, dealer, p2, rng, oo);

  size_t v_width = 0;
  const auto y_prf =
      DecodePrfVector(p2.Recv(net::MsgType::kPrfVec), &v_width);
  out.report.m = y_prf.size();
  const IndexVectors iv = ComputeIndexVectors(x_prf, y_prf, rng);
  out.report.c = iv.c();
  spdlog::debug("level1 P1: n={} m={} c={}", data.size(), y_prf.size(),
                iv.c());

  MosnTiming timing;
  auto ot = MakeOt(cfg, "level1", rng);
  osn::MosnConfig mc{y_prf.size(), v_width, cfg.label_bits};
  out.shares.v = MosnAsReceiver(mc, Injection(iv.j, y_prf.size()), *ot, p2,
                                rng, timing);

  const ShareVector u = SelectRows(data.Attributes(), iv.k);
  auto [keep, send] = ShareSplit(u, rng);
  p2.Send(net::MsgType::kShareVec, EncodeShareVector(send));
  out.shares.u = std::move(keep);

  out.intersection.reserve(iv.c());
  for (Index k : iv.k) out.intersection.push_back(data[k].id);
  Finish(out.report, t0, timing.offline_ms, p2.stats() - before);
  return out;
}

PartyOutput RunLevel1P2(const Dataset& data, net::Endpoint& p1,
                        const ProtocolConfig& cfg, RandomSource& rng) {
  PSA_ENFORCE(cfg.dealer_seed.has_value(),
              "level 1 needs a dealer seed for the VOLE correlation");
  const auto t0 = Clock::now();
  const auto before = p1.stats();
  PartyOutput out;
  out.report.m = data.size();

  oprf::Dealer dealer(*cfg.dealer_seed);
  oprf::OprfOptions oo{cfg.okvs, cfg.session + "/oprf"};
  const auto seed = oprf::OprfRunP2(dealer, p1, oo);
  auto y_prf = oprf::OprfEvalSeed(seed, data.IdBytes());
  ShareVector v = data.Attributes();
  JointShuffle(y_prf, v, rng);
  p1.Send(net::MsgType::kPrfVec, EncodePrfVector(y_prf, data.attr_width()));

  MosnTiming timing;
  auto ot = MakeOt(cfg, "level1", rng);
  osn::MosnConfig mc{data.size(), data.attr_width(), cfg.label_bits};
  out.shares.v = MosnAsSender(mc, v, *ot, p1, rng, timing);
  out.shares.u = DecodeShareVector(p1.Recv(net::MsgType::kShareVec));
  if (out.shares.u.size() != out.shares.v.size()) {
    PSA_THROW(ProtocolAbort, "P1 sent {} u-shares for {} joined rows",
              out.shares.u.size(), out.shares.v.size());
  }
  out.report.c = out.shares.size();
  Finish(out.report, t0, timing.offline_ms, p1.stats() - before);
  return out;
}

PrfKey AgreeKey(Owner who, net::Endpoint& peer, RandomSource& rng) {
  uint8_t sk[crypto_scalarmult_SCALARBYTES];
  rng.Fill(sk);
  uint8_t pk[crypto_scalarmult_BYTES];
  crypto_scalarmult_base(pk, sk);
  peer.Send(net::MsgType::kKeyExchange, Bytes(pk, pk + sizeof(pk)));
  const Bytes other = peer.Recv(net::MsgType::kKeyExchange);
  if (other.size() != crypto_scalarmult_BYTES) {
    PSA_THROW(ProtocolAbort, "key share has {} bytes", other.size());
  }
  uint8_t shared[crypto_scalarmult_BYTES];
  if (crypto_scalarmult(shared, sk, other.data()) != 0) {
    PSA_THROW(ProtocolAbort, "degenerate key share from peer");
  }
  sodium_memzero(sk, sizeof(sk));
  // Transcript order is fixed as (P1 share, P2 share) on both sides.
  Bytes material(shared, shared + sizeof(shared));
  const uint8_t* first = who == Owner::kP1 ? pk : other.data();
  const uint8_t* second = who == Owner::kP1 ? other.data() : pk;
  material.insert(material.end(), first, first + crypto_scalarmult_BYTES);
  material.insert(material.end(), second, second + crypto_scalarmult_BYTES);
  sodium_memzero(shared, sizeof(shared));
  const auto digest = Sha256(material);
  return PrfKey::FromBytes({digest.data(), 16});
}

PartyOutput RunLevel2Owner(Owner who, const Dataset& data,
                           net::Endpoint& peer, net::Endpoint& server,
                           const ProtocolConfig& cfg, RandomSource& rng) {
  const auto t0 = Clock::now();
  const auto before_peer = peer.stats();
  const auto before_server = server.stats();
  PartyOutput out;

  const PrfKey r = AgreeKey(who, peer, rng);
  MmoHash prf(r);
  std::vector<Block> tags(data.size());
  for (size_t i = 0; i < data.size(); ++i) {
    const auto& id = data[i].id;
    tags[i] = prf(AsBytes(id));
  }
  ShareVector attrs = data.Attributes();
  JointShuffle(tags, attrs, rng);
  server.Send(net::MsgType::kPrfVec, EncodePrfVector(tags, data.attr_width()));

  MosnTiming timing;
  const char* session = who == Owner::kP1 ? "level2/u" : "level2/v";
  auto ot = MakeOt(cfg, session, rng);
  osn::MosnConfig mc{data.size(), data.attr_width(), cfg.label_bits};
  ShareVector mine = MosnAsSender(mc, attrs, *ot, server, rng, timing);
  ShareVector forwarded =
      DecodeShareVector(server.Recv(net::MsgType::kShareVec));
  if (forwarded.size() != mine.size()) {
    PSA_THROW(ProtocolAbort, "server forwarded {} rows for {} joined rows",
              forwarded.size(), mine.size());
  }
  if (who == Owner::kP1) {
    out.shares.u = std::move(mine);
    out.shares.v = std::move(forwarded);
  } else {
    out.shares.u = std::move(forwarded);
    out.shares.v = std::move(mine);
  }
  out.report.c = out.shares.size();
  (who == Owner::kP1 ? out.report.n : out.report.m) = data.size();
  auto stats = peer.stats() - before_peer;
  stats += server.stats() - before_server;
  Finish(out.report, t0, timing.offline_ms, stats);
  return out;
}

ServerOutput RunLevel2Server(net::Endpoint& p1, net::Endpoint& p2,
                             const ProtocolConfig& cfg, RandomSource& rng) {
  const auto t0 = Clock::now();
  const auto before1 = p1.stats();
  const auto before2 = p2.stats();
  ServerOutput out;

  size_t u_width = 0, v_width = 0;
  const auto x_tags = DecodePrfVector(p1.Recv(net::MsgType::kPrfVec), &u_width);
  const auto y_tags = DecodePrfVector(p2.Recv(net::MsgType::kPrfVec), &v_width);
  const IndexVectors iv = ComputeIndexVectors(x_tags, y_tags, rng);
  out.report.n = x_tags.size();
  out.report.m = y_tags.size();
  out.report.c = iv.c();
  spdlog::debug("level2 server: n={} m={} c={}", out.report.n, out.report.m,
                out.report.c);

  auto ot_u = MakeOt(cfg, "level2/u", rng);
  auto ot_v = MakeOt(cfg, "level2/v", rng);
  osn::MosnConfig mc_u{x_tags.size(), u_width, cfg.label_bits};
  osn::MosnConfig mc_v{y_tags.size(), v_width, cfg.label_bits};
  const Injection pi_u(iv.k, x_tags.size());
  const Injection pi_v(iv.j, y_tags.size());
  RandomSource rng_u = rng.Derive("mosn/u");
  RandomSource rng_v = rng.Derive("mosn/v");
  MosnTiming t_u, t_v;
  ShareVector share_u, share_v;
  auto run_u = [&] {
    share_u = MosnAsReceiver(mc_u, pi_u, *ot_u, p1, rng_u, t_u);
  };
  auto run_v = [&] {
    share_v = MosnAsReceiver(mc_v, pi_v, *ot_v, p2, rng_v, t_v);
  };
  if (cfg.concurrent) {
    std::exception_ptr err;
    std::thread t([&] {
      try {
        run_v();
      } catch (...) {
        err = std::current_exception();
        p1.Close();
      }
    });
    try {
      run_u();
    } catch (...) {
      p2.Close();
      t.join();
      throw;
    }
    t.join();
    if (err) std::rethrow_exception(err);
  } else {
    run_u();
    run_v();
  }
  // Each owner receives the server's share of the other owner's column.
  p2.Send(net::MsgType::kShareVec, EncodeShareVector(share_u));
  p1.Send(net::MsgType::kShareVec, EncodeShareVector(share_v));

  auto stats = p1.stats() - before1;
  stats += p2.stats() - before2;
  const double offline = cfg.concurrent
                             ? std::max(t_u.offline_ms, t_v.offline_ms)
                             : t_u.offline_ms + t_v.offline_ms;
  Finish(out.report, t0, offline, stats);
  return out;
}

namespace {

// Runs each task on its own thread. On the first failure every endpoint is
// closed so blocked peers wake up, then that failure is rethrown.
void RunParties(std::vector<std::function<void()>> tasks,
                const std::vector<net::Endpoint*>& endpoints) {
  std::mutex mu;
  std::exception_ptr first;
  std::vector<std::thread> threads;
  for (auto& task : tasks) {
    threads.emplace_back([&, task = std::move(task)] {
      try {
        task();
      } catch (...) {
        {
          std::lock_guard lock(mu);
          if (!first) first = std::current_exception();
        }
        for (auto* e : endpoints) e->Close();
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first) std::rethrow_exception(first);
}

}  // namespace

Level1Result RunLevel1(const Dataset& p1, const Dataset& p2,
                       const ProtocolConfig& cfg, const net::ChannelSpec& spec,
                       RandomSource& rng) {
  auto [a, b] = net::OpenPair(spec);
  RandomSource r1(rng.NextSeed()), r2(rng.NextSeed());
  Level1Result res;
  const auto t0 = Clock::now();
  RunParties({[&, &a = a] { res.p1 = RunLevel1P1(p1, *a, cfg, r1); },
              [&, &b = b] { res.p2 = RunLevel1P2(p2, *b, cfg, r2); }},
             {a.get(), b.get()});
  res.wall_ms = MsSince(t0);
  return res;
}

Level2Result RunLevel2(const Dataset& p1, const Dataset& p2,
                       const ProtocolConfig& cfg, const net::ChannelSpec& spec,
                       RandomSource& rng) {
  auto [p1p2, p2p1] = net::OpenPair(spec);
  auto [p1s, sp1] = net::OpenPair(spec);
  auto [p2s, sp2] = net::OpenPair(spec);
  RandomSource r1(rng.NextSeed()), r2(rng.NextSeed()),
               rs(rng.NextSeed());
  Level2Result res;
  const auto t0 = Clock::now();
  RunParties(
      {[&] {
         res.p1 = RunLevel2Owner(Owner::kP1, p1, *p1p2, *p1s, cfg, r1);
       },
       [&] {
         res.p2 = RunLevel2Owner(Owner::kP2, p2, *p2p1, *p2s, cfg, r2);
       },
       [&] { res.server = RunLevel2Server(*sp1, *sp2, cfg, rs); }},
      {p1p2.get(), p2p1.get(), p1s.get(), sp1.get(), p2s.get(), sp2.get()});
  res.wall_ms = MsSince(t0);
  return res;
}

}  // namespace psa::align
