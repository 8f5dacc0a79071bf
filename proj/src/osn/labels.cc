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

#include "psa/osn/labels.h"

#include <cstring>

#include "psa/base/counters.h"
#include "psa/base/exception.h"

namespace psa::osn {

WireLabels::WireLabels(std::shared_ptr<const benes::Topology> topology,
                       size_t width)
    : topology_(std::move(topology)), width_(width) {
  PSA_ENFORCE(width_ > 0, "label width must be positive");
  const size_t total = topology_->cols() * topology_->n_inputs() * width_;
  a_.resize(total);
  b_.resize(total);
}

bool WireLabels::OnGate(size_t c, size_t p) const {
  const size_t row = p / 2;
  return row < topology_->rows() && topology_->used(c, row);
}

WireLabels SenderLabels(std::shared_ptr<const benes::Topology> topology,
                        size_t width, RandomSource& rng) {
  GlobalWorkCounters().label_generations.fetch_add(1,
                                                   std::memory_order_relaxed);
  WireLabels labels(std::move(topology), width);
  const size_t m = labels.m();
  for (size_t p = 0; p < m; ++p) rng.Fill(labels.A(0, p));
  for (size_t c = 0; c < labels.cols(); ++c) {
    if (c > 0) {
      auto link = labels.topology().links(c);
      for (size_t q = 0; q < m; ++q) {
        auto dst = labels.A(c, link[q]);
        auto src = labels.B(c - 1, q);
        std::memcpy(dst.data(), src.data(), width);
      }
    }
    for (size_t p = 0; p < m; ++p) {
      if (labels.OnGate(c, p)) {
        rng.Fill(labels.B(c, p));
      } else {
        auto src = labels.A(c, p);
        std::memcpy(labels.B(c, p).data(), src.data(), width);
      }
    }
  }
  return labels;
}

void SenderGateMessages(const WireLabels& labels, benes::GateId gate,
                        MutableByteSpan m0, MutableByteSpan m1) {
  const auto& topo = labels.topology();
  PSA_ENFORCE(gate.col < topo.cols() && gate.row < topo.rows() &&
                  topo.used(gate.col, gate.row),
              "gate ({}, {}) is not used", gate.col, gate.row);
  const size_t w = labels.width();
  PSA_ENFORCE(m0.size() == 2 * w && m1.size() == 2 * w,
              "gate messages must be {} bytes", 2 * w);
  const size_t j0 = 2 * gate.row, j1 = j0 + 1;
  const auto a0 = labels.A(gate.col, j0), a1 = labels.A(gate.col, j1);
  const auto b0 = labels.B(gate.col, j0), b1 = labels.B(gate.col, j1);
  XorTo(m0.first(w), a0, b0);
  XorTo(m0.last(w), a1, b1);
  XorTo(m1.first(w), a0, b1);
  XorTo(m1.last(w), a1, b0);
}

ot::OtMessages SenderAllGateMessages(const WireLabels& labels) {
  const auto& gates = labels.topology().used_gates();
  ot::OtMessages msgs(gates.size(), 2 * labels.width());
  for (size_t i = 0; i < gates.size(); ++i) {
    SenderGateMessages(labels, gates[i], msgs.m0(i), msgs.m1(i));
  }
  return msgs;
}

Bytes ReceiverEvaluate(const benes::SwitchProgram& prog, ByteSpan ot_outputs,
                       ByteSpan masked, size_t width) {
  const auto& topo = prog.topology();
  const size_t m = topo.n_inputs();
  const size_t msg = 2 * width;
  if (masked.size() != m * width) {
    PSA_THROW(InvalidArgument, "masked vector has {} bytes, expected {}",
              masked.size(), m * width);
  }
  if (ot_outputs.size() != topo.used_gate_count() * msg) {
    PSA_THROW(InvalidArgument, "have {} bytes of OT output for {} gates",
              ot_outputs.size(), topo.used_gate_count());
  }
  Bytes cur(masked.begin(), masked.end());
  Bytes next(cur.size());
  Bytes tmp(width);
  size_t gate = 0;
  for (size_t c = 0; c < topo.cols(); ++c) {
    if (c > 0) {
      auto link = topo.links(c);
      for (size_t q = 0; q < m; ++q) {
        std::memcpy(next.data() + link[q] * width, cur.data() + q * width,
                    width);
      }
      cur.swap(next);
    }
    for (size_t r = 0; r < topo.rows(); ++r) {
      if (!topo.used(c, r)) continue;
      uint8_t* w0 = cur.data() + 2 * r * width;
      uint8_t* w1 = w0 + width;
      const uint8_t* corr = ot_outputs.data() + gate * msg;
      XorInto({w0, width}, {corr, width});
      XorInto({w1, width}, {corr + width, width});
      if (prog.bit(c, r)) {
        std::memcpy(tmp.data(), w0, width);
        std::memcpy(w0, w1, width);
        std::memcpy(w1, tmp.data(), width);
      }
      ++gate;
    }
  }
  return cur;
}

}  // namespace psa::osn
