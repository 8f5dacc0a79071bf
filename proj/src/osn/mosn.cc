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

#include "psa/osn/mosn.h"

#include <cstring>

#include "psa/base/exception.h"
#include "psa/benes/looping.h"
#include "psa/osn/labels.h"

namespace psa::osn {

size_t MosnConfig::lanes() const {
  const size_t bits = value_width * 8;
  return bits == 0 ? 1 : (bits + label_bits - 1) / label_bits;
}

void MosnConfig::Validate() const {
  PSA_ENFORCE(label_bits >= 8 && label_bits % 8 == 0,
              "label width {} bits is not a positive multiple of 8",
              label_bits);
  PSA_ENFORCE(m == 0 || value_width > 0, "rows must be at least one byte wide");
}

Bytes EncodeIndexVector(std::span<const Index> v) {
  ByteWriter w;
  w.U32(static_cast<uint32_t>(v.size()));
  for (Index x : v) w.U32(x);
  return w.Take();
}

std::vector<Index> DecodeIndexVector(ByteSpan payload) {
  ByteReader rd(payload);
  const uint32_t n = rd.U32();
  if (rd.remaining() != 4ull * n) {
    PSA_THROW(ProtocolAbort, "index vector of {} entries has {} bytes", n,
              rd.remaining());
  }
  std::vector<Index> v(n);
  for (auto& x : v) x = rd.U32();
  return v;
}

MosnReceiverOffline MosnOfflineReceiver(const MosnConfig& config,
                                        ot::OtProvider& ot, net::Endpoint& ch,
                                        RandomSource& rng) {
  config.Validate();
  MosnReceiverOffline st;
  st.config_ = config;
  if (config.m == 0) return st;
  const size_t n = config.network_size();
  st.rho1_ = RandomPermutation(n, rng);
  auto topo = benes::Topology::Build(n);
  st.program_ = std::make_unique<benes::SwitchProgram>(
      benes::Program(topo, st.rho1_));
  const auto choices = st.program_->ChoiceBits();
  st.ot_outputs_ = ot.Receive(choices, 2 * config.label_width(), ch);
  st.ot_instances_ = choices.size();
  return st;
}

MosnSenderOffline MosnOfflineSender(const MosnConfig& config,
                                    ot::OtProvider& ot, net::Endpoint& ch,
                                    RandomSource& rng) {
  config.Validate();
  MosnSenderOffline st;
  st.config_ = config;
  if (config.m == 0) return st;
  const size_t n = config.network_size();
  const size_t w = config.label_width();
  auto labels = SenderLabels(benes::Topology::Build(n), w, rng);
  {
    const auto msgs = SenderAllGateMessages(labels);
    ot.Send(msgs, ch);
    st.ot_instances_ = msgs.count();
  }
  st.first_masks_.resize(n * w);
  st.last_masks_.resize(n * w);
  for (size_t p = 0; p < n; ++p) {
    std::memcpy(st.first_masks_.data() + p * w, labels.A(0, p).data(), w);
    std::memcpy(st.last_masks_.data() + p * w,
                labels.B(labels.last_col(), p).data(), w);
  }
  return st;
}

ShareVector MosnOnlineReceiver(MosnReceiverOffline& st, const Injection& pi,
                               net::Endpoint& ch) {
  if (st.consumed_) PSA_THROW(InvalidArgument, "offline state already used");
  const MosnConfig& cfg = st.config_;
  PSA_ENFORCE(pi.codomain_size() == cfg.m,
              "injection codomain {} does not match m = {}",
              pi.codomain_size(), cfg.m);
  st.consumed_ = true;
  if (cfg.m == 0) return ShareVector(cfg.value_width, 0);

  const size_t n = cfg.network_size();
  const size_t w = cfg.label_width();
  const Bytes payload = ch.Recv(net::MsgType::kMaskedVec);
  ByteReader rd(payload);
  const uint32_t rows = rd.U32();
  const uint32_t width = rd.U32();
  if (rows != n || width != w) {
    PSA_THROW(ProtocolAbort, "masked vector is {}x{}, expected {}x{}", rows,
              width, n, w);
  }
  const ByteSpan masked = rd.Raw(static_cast<size_t>(rows) * width);
  rd.ExpectEnd();

  const Bytes out = ReceiverEvaluate(*st.program_, st.ot_outputs_, masked, w);
  const Injection padded(pi.map(), n);
  const Injection rho2 = ComposeRho2(padded, st.rho1_);
  ch.Send(net::MsgType::kRho2, EncodeIndexVector(rho2.map()));

  ShareVector share(cfg.value_width, rho2.domain_size());
  for (size_t i = 0; i < rho2.domain_size(); ++i) {
    std::memcpy(share.MutableRow(i).data(), out.data() + rho2[i] * w,
                cfg.value_width);
  }
  st.ot_outputs_.clear();
  return share;
}

ShareVector MosnOnlineSender(MosnSenderOffline& st, const ShareVector& u,
                             net::Endpoint& ch) {
  if (st.consumed_) PSA_THROW(InvalidArgument, "offline state already used");
  const MosnConfig& cfg = st.config_;
  PSA_ENFORCE(u.size() == cfg.m && u.width() == cfg.value_width,
              "sender vector is {}x{}, expected {}x{}", u.size(), u.width(),
              cfg.m, cfg.value_width);
  st.consumed_ = true;
  if (cfg.m == 0) return ShareVector(cfg.value_width, 0);

  const size_t n = cfg.network_size();
  const size_t w = cfg.label_width();
  ByteWriter wr;
  wr.U32(static_cast<uint32_t>(n));
  wr.U32(static_cast<uint32_t>(w));
  Bytes masked = st.first_masks_;
  for (size_t j = 0; j < cfg.m; ++j) {
    XorInto({masked.data() + j * w, cfg.value_width}, u.Row(j));
  }
  wr.Raw(masked);
  ch.Send(net::MsgType::kMaskedVec, wr.Take());

  const auto rho2 = DecodeIndexVector(ch.Recv(net::MsgType::kRho2));
  const auto report = ValidateInjection(rho2, n);
  if (!report.ok()) {
    PSA_THROW(ProtocolAbort, "received invalid rho2: {}", report.ToString());
  }
  ShareVector share(cfg.value_width, rho2.size());
  for (size_t i = 0; i < rho2.size(); ++i) {
    std::memcpy(share.MutableRow(i).data(),
                st.last_masks_.data() + rho2[i] * w, cfg.value_width);
  }
  st.first_masks_.clear();
  st.last_masks_.clear();
  return share;
}

}  // namespace psa::osn
