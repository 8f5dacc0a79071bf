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
#include <span>
#include <string>
#include <vector>

#include "psa/base/exception.h"
#include "psa/benes/topology.h"

namespace psa::benes {

// Gate settings for one topology: true = crossover. Unused positions are
// false.
class SwitchProgram {
 public:
  explicit SwitchProgram(std::shared_ptr<const Topology> topology);

  const Topology& topology() const { return *topology_; }
  const std::shared_ptr<const Topology>& shared_topology() const {
    return topology_;
  }
  size_t n_inputs() const { return topology_->n_inputs(); }
  size_t cols() const { return topology_->cols(); }
  size_t rows() const { return topology_->rows(); }

  bool bit(size_t col, size_t row) const { return bits_[col * rows() + row]; }
  void set_bit(size_t col, size_t row, bool v);
  bool used(size_t col, size_t row) const {
    return topology_->used(col, row);
  }

  // One bit per used gate, in Topology::used_gates() order.
  std::vector<uint8_t> ChoiceBits() const;

  // One line per column; '0' straight, '1' crossover, '.' unused.
  std::string Dump() const;

 private:
  std::shared_ptr<const Topology> topology_;
  std::vector<uint8_t> bits_;
};

// Routes `input` through the programmed network. output[i] = input[p(i)]
// for the permutation p the program realizes.
template <typename T>
std::vector<T> EvalPlain(const SwitchProgram& prog, std::span<const T> input) {
  const Topology& topo = prog.topology();
  if (input.size() != topo.n_inputs()) {
    PSA_THROW(InvalidArgument, "network has {} inputs, got {}",
              topo.n_inputs(), input.size());
  }
  std::vector<T> cur(input.begin(), input.end());
  std::vector<T> next(cur.size());
  for (size_t c = 0; c < topo.cols(); ++c) {
    if (c > 0) {
      auto link = topo.links(c);
      for (size_t q = 0; q < cur.size(); ++q) {
        next[link[q]] = std::move(cur[q]);
      }
      cur.swap(next);
    }
    for (size_t r = 0; r < topo.rows(); ++r) {
      if (topo.used(c, r) && prog.bit(c, r)) {
        std::swap(cur[2 * r], cur[2 * r + 1]);
      }
    }
  }
  return cur;
}

template <typename T>
std::vector<T> EvalPlain(const SwitchProgram& prog,
                         const std::vector<T>& input) {
  return EvalPlain(prog, std::span<const T>(input));
}

}  // namespace psa::benes
