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

#pragma once

#include <memory>

#include "psa/base/bytes.h"
#include "psa/benes/switch_program.h"
#include "psa/benes/topology.h"
#include "psa/crypto/random.h"
#include "psa/ot/ot.h"

namespace psa::osn {

// Sender-side masks. A(c, p) masks the wire entering column c at position p,
// B(c, p) the wire leaving it. Hardwired links carry B of one column into A of
// the next; positions without a used gate pass through with B == A.
class WireLabels {
 public:
  WireLabels(std::shared_ptr<const benes::Topology> topology, size_t width);

  const benes::Topology& topology() const { return *topology_; }
  size_t width() const { return width_; }
  size_t cols() const { return topology_->cols(); }
  size_t m() const { return topology_->n_inputs(); }
  size_t last_col() const { return cols() - 1; }

  MutableByteSpan A(size_t c, size_t p) {
    return {a_.data() + Off(c, p), width_};
  }
  MutableByteSpan B(size_t c, size_t p) {
    return {b_.data() + Off(c, p), width_};
  }
  ByteSpan A(size_t c, size_t p) const {
    return {a_.data() + Off(c, p), width_};
  }
  ByteSpan B(size_t c, size_t p) const {
    return {b_.data() + Off(c, p), width_};
  }

  // True if position p of column c sits on a used gate.
  bool OnGate(size_t c, size_t p) const;

 private:
  size_t Off(size_t c, size_t p) const { return (c * m() + p) * width_; }

  std::shared_ptr<const benes::Topology> topology_;
  size_t width_;
  Bytes a_;
  Bytes b_;
};

// Fresh labels satisfying the link and pass-through equalities.
WireLabels SenderLabels(std::shared_ptr<const benes::Topology> topology,
                        size_t width, RandomSource& rng);

// OT pair for gate (col, row): m0 corrects a straight-through setting, m1 a
// crossover. Each message is two labels long.
void SenderGateMessages(const WireLabels& labels, benes::GateId gate,
                        MutableByteSpan m0, MutableByteSpan m1);
ot::OtMessages SenderAllGateMessages(const WireLabels& labels);

// Runs the masked vector through the programmed network. ot_outputs holds one
// 2*width message per used gate in used_gates() order. Returns m rows of
// width bytes: row j is u[p(j)] ^ B(last, j).
Bytes ReceiverEvaluate(const benes::SwitchProgram& prog, ByteSpan ot_outputs,
                       ByteSpan masked, size_t width);

}  // namespace psa::osn
