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

#include "psa/benes/switch_program.h"

namespace psa::benes {

SwitchProgram::SwitchProgram(std::shared_ptr<const Topology> topology)
    : topology_(std::move(topology)),
      bits_(topology_->cols() * topology_->rows(), 0) {}

void SwitchProgram::set_bit(size_t col, size_t row, bool v) {
  PSA_ENFORCE(used(col, row) || !v, "gate ({}, {}) is not part of the network",
              col, row);
  bits_[col * rows() + row] = v ? 1 : 0;
}

std::vector<uint8_t> SwitchProgram::ChoiceBits() const {
  const auto& gates = topology_->used_gates();
  std::vector<uint8_t> out(gates.size());
  for (size_t i = 0; i < gates.size(); ++i) {
    out[i] = bit(gates[i].col, gates[i].row) ? 1 : 0;
  }
  return out;
}

std::string SwitchProgram::Dump() const {
  std::string out;
  out.reserve(cols() * (rows() + 1));
  for (size_t c = 0; c < cols(); ++c) {
    for (size_t r = 0; r < rows(); ++r) {
      out += !used(c, r) ? '.' : (bit(c, r) ? '1' : '0');
    }
    out += '\n';
  }
  return out;
}

}  // namespace psa::benes
