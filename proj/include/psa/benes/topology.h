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

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace psa::benes {

// (2 * ceil(log2 n) - 1, floor(n / 2)). Throws for n < 2.
std::pair<size_t, size_t> GateDims(size_t n);

struct GateId {
  uint32_t col = 0;
  uint32_t row = 0;

  bool operator==(const GateId&) const = default;
};

// One block of the recursive construction. Sizes 2 and 3 are leaves; any
// larger block splits into an upper half of floor(n/2) wires and a lower half
// of ceil(n/2) wires between its input column and its output column.
struct SubNetwork {
  enum class Kind { kSwitch2, kBlock3, kRecursive };

  Kind kind;
  uint32_t size;
  uint32_t col_begin;
  uint32_t col_end;
  uint32_t row_begin;
  int32_t upper = -1;
  int32_t lower = -1;
};

// Public wiring of a generalized Benes network on N >= 2 inputs.
//
// Each column holds up to floor(N/2) gates. The gate in row l acts on wire
// positions 2l and 2l+1 of its column (its dual pair). Positions not covered
// by a used gate pass their wire straight through. Between column c-1 and c
// the hardwired connection maps output position q of c-1 to input position
// Link(c, q) of c. Network input i enters column 0 at position i; network
// output j leaves the last column at position j.
class Topology {
 public:
  static std::shared_ptr<const Topology> Build(size_t n_inputs);

  size_t n_inputs() const { return n_; }
  size_t cols() const { return cols_; }
  size_t rows() const { return rows_; }

  bool used(size_t col, size_t row) const { return used_[col * rows_ + row]; }
  size_t used_gate_count() const { return used_count_; }
  // Used gates in column-major order; this is the OT batch order.
  const std::vector<GateId>& used_gates() const { return gates_; }

  // Valid for 1 <= col < cols().
  std::span<const uint32_t> links(size_t col) const { return links_[col]; }

  const std::vector<SubNetwork>& subnetworks() const { return nodes_; }
  const SubNetwork& root() const { return nodes_.front(); }

 private:
  class Builder;

  size_t n_ = 0;
  size_t cols_ = 0;
  size_t rows_ = 0;
  size_t used_count_ = 0;
  std::vector<uint8_t> used_;
  std::vector<GateId> gates_;
  std::vector<std::vector<uint32_t>> links_;
  std::vector<SubNetwork> nodes_;
};

}  // namespace psa::benes
