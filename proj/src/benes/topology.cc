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

#include "psa/benes/topology.h"

#include <algorithm>
#include <bit>
#include <limits>

#include "psa/base/exception.h"

namespace psa::benes {

namespace {

constexpr uint32_t kUnset = std::numeric_limits<uint32_t>::max();

size_t CeilLog2(size_t n) { return std::bit_width(n - 1); }

size_t Depth(size_t n) { return 2 * CeilLog2(n) - 1; }

}  // namespace

std::pair<size_t, size_t> GateDims(size_t n) {
  if (n < 2) {
    PSA_THROW(InvalidArgument, "benes network needs at least 2 inputs, got {}",
              n);
  }
  return {Depth(n), n / 2};
}

class Topology::Builder {
 public:
  explicit Builder(Topology& t) : t_(t) {}

  void Run() {
    t_.used_.assign(t_.cols_ * t_.rows_, 0);
    Place(static_cast<uint32_t>(t_.n_), 0,
          static_cast<uint32_t>(t_.cols_ - 1), 0);
    CollectGates();
    PrepareWiring();

    std::vector<End> inputs(t_.n_);
    for (size_t i = 0; i < t_.n_; ++i) {
      inputs[i] = {-1, static_cast<uint32_t>(i)};
    }
    auto outputs = Route(0, std::move(inputs));
    const auto last = static_cast<int64_t>(t_.cols_ - 1);
    for (size_t j = 0; j < outputs.size(); ++j) {
      Advance(outputs[j], last);
      PSA_ENFORCE(outputs[j].pos == j, "output {} leaves at position {}", j,
                  outputs[j].pos);
    }
    Verify();
  }

 private:
  // A wire that currently leaves column `col` at output position `pos`;
  // col == -1 denotes a network input not yet in column 0.
  struct End {
    int64_t col;
    uint32_t pos;
  };

  int32_t Place(uint32_t n, uint32_t c0, uint32_t c1, uint32_t r0) {
    PSA_ENFORCE(c1 >= c0 && c1 - c0 + 1 >= Depth(n),
                "sub-network of size {} does not fit columns [{}, {}]", n, c0,
                c1);
    const auto idx = static_cast<int32_t>(t_.nodes_.size());
    SubNetwork node{SubNetwork::Kind::kRecursive, n, c0, c1, r0};
    if (n == 2) {
      node.kind = SubNetwork::Kind::kSwitch2;
      t_.nodes_.push_back(node);
      Mark(c0, r0);
      return idx;
    }
    if (n == 3) {
      node.kind = SubNetwork::Kind::kBlock3;
      t_.nodes_.push_back(node);
      Mark(c0, r0);
      Mark(c0 + 1, r0);
      Mark(c1, r0);
      return idx;
    }
    t_.nodes_.push_back(node);
    const uint32_t n1 = n / 2;
    const uint32_t n2 = n - n1;
    for (uint32_t k = 0; k < n1; ++k) {
      Mark(c0, r0 + k);
      Mark(c1, r0 + k);
    }
    const int32_t upper = Place(n1, c0 + 1, c1 - 1, r0);
    const int32_t lower = Place(n2, c0 + 1, c1 - 1, r0 + n1 / 2);
    t_.nodes_[idx].upper = upper;
    t_.nodes_[idx].lower = lower;
    return idx;
  }

  void Mark(uint32_t col, uint32_t row) {
    PSA_ENFORCE(row < t_.rows_, "row {} beyond {}", row, t_.rows_);
    uint8_t& slot = t_.used_[col * t_.rows_ + row];
    PSA_ENFORCE(slot == 0, "gate ({}, {}) placed twice", col, row);
    slot = 1;
  }

  void CollectGates() {
    for (uint32_t c = 0; c < t_.cols_; ++c) {
      for (uint32_t r = 0; r < t_.rows_; ++r) {
        if (t_.used(c, r)) {
          t_.gates_.push_back({c, r});
        }
      }
    }
    t_.used_count_ = t_.gates_.size();
  }

  void PrepareWiring() {
    t_.links_.assign(t_.cols_, {});
    fed_.assign(t_.cols_, {});
    free_.assign(t_.cols_, {});
    for (size_t c = 0; c < t_.cols_; ++c) {
      if (c > 0) {
        t_.links_[c].assign(t_.n_, kUnset);
        fed_[c].assign(t_.n_, 0);
      }
      for (size_t p = t_.n_; p-- > 0;) {
        const size_t row = p / 2;
        const bool in_gate = row < t_.rows_ && t_.used(c, row);
        if (!in_gate) {
          free_[c].push_back(static_cast<uint32_t>(p));
        }
      }
    }
  }

  uint32_t TakeFree(size_t col) {
    PSA_ENFORCE(!free_[col].empty(), "no pass-through slot left in column {}",
                col);
    uint32_t p = free_[col].back();
    free_[col].pop_back();
    return p;
  }

  uint32_t TakeSpecific(size_t col, uint32_t pos) {
    auto& slots = free_[col];
    auto it = std::find(slots.begin(), slots.end(), pos);
    PSA_ENFORCE(it != slots.end(), "position {} of column {} is not free", pos,
                col);
    slots.erase(it);
    return pos;
  }

  void SetLink(size_t col, uint32_t out_pos, uint32_t in_pos) {
    auto& link = t_.links_[col][out_pos];
    PSA_ENFORCE(link == kUnset, "output {} of column {} wired twice", out_pos,
                col - 1);
    PSA_ENFORCE(fed_[col][in_pos] == 0, "input {} of column {} wired twice",
                in_pos, col);
    link = in_pos;
    fed_[col][in_pos] = 1;
  }

  // Pass-through up to and including column `target`.
  void Advance(End& w, int64_t target) {
    while (w.col < target) {
      const auto c = static_cast<size_t>(w.col + 1);
      uint32_t p = c == 0 ? TakeSpecific(0, w.pos) : TakeFree(c);
      if (c > 0) {
        SetLink(c, w.pos, p);
      }
      w = {static_cast<int64_t>(c), p};
    }
  }

  // Delivers the wire to input position `pos` of gate column `col`.
  void Enter(End& w, uint32_t col, uint32_t pos) {
    Advance(w, static_cast<int64_t>(col) - 1);
    if (col == 0) {
      PSA_ENFORCE(w.col == -1 && w.pos == pos,
                  "network input {} cannot enter column 0 at {}", w.pos, pos);
    } else {
      SetLink(col, w.pos, pos);
    }
    w = {col, pos};
  }

  std::vector<End> Route(int32_t idx, std::vector<End> in) {
    const SubNetwork node = t_.nodes_[idx];
    const uint32_t n = node.size;
    const uint32_t r0 = node.row_begin;
    const uint32_t c0 = node.col_begin;
    const uint32_t c1 = node.col_end;

    if (node.kind == SubNetwork::Kind::kSwitch2) {
      Enter(in[0], c0, 2 * r0);
      Enter(in[1], c0, 2 * r0 + 1);
      return in;
    }
    if (node.kind == SubNetwork::Kind::kBlock3) {
      // g0 on (in0, in1); g1 on (g0.out1, in2); g2 on (g0.out0, g1.out0).
      Enter(in[0], c0, 2 * r0);
      Enter(in[1], c0, 2 * r0 + 1);
      End a0 = in[0];
      End a1 = in[1];
      Enter(a1, c0 + 1, 2 * r0);
      Enter(in[2], c0 + 1, 2 * r0 + 1);
      End b0 = a1;
      End b1 = in[2];
      Enter(a0, c1, 2 * r0);
      Enter(b0, c1, 2 * r0 + 1);
      return {a0, b0, b1};
    }

    const uint32_t n1 = n / 2;
    const uint32_t n2 = n - n1;
    std::vector<End> upper_in(n1);
    std::vector<End> lower_in(n2);
    for (uint32_t k = 0; k < n1; ++k) {
      Enter(in[2 * k], c0, 2 * (r0 + k));
      Enter(in[2 * k + 1], c0, 2 * (r0 + k) + 1);
      upper_in[k] = in[2 * k];
      lower_in[k] = in[2 * k + 1];
    }
    if (n % 2 == 1) {
      lower_in[n2 - 1] = in[n - 1];
    }
    auto upper_out = Route(node.upper, std::move(upper_in));
    auto lower_out = Route(node.lower, std::move(lower_in));

    std::vector<End> out(n);
    for (uint32_t k = 0; k < n1; ++k) {
      Enter(upper_out[k], c1, 2 * (r0 + k));
      Enter(lower_out[k], c1, 2 * (r0 + k) + 1);
      out[2 * k] = upper_out[k];
      out[2 * k + 1] = lower_out[k];
    }
    if (n % 2 == 1) {
      out[n - 1] = lower_out[n2 - 1];
    }
    return out;
  }

  void Verify() const {
    for (size_t c = 0; c < t_.cols_; ++c) {
      PSA_ENFORCE(free_[c].empty(), "column {} has {} unwired slots", c,
                  free_[c].size());
      if (c == 0) continue;
      for (size_t q = 0; q < t_.n_; ++q) {
        PSA_ENFORCE(t_.links_[c][q] != kUnset,
                    "output {} of column {} is dangling", q, c - 1);
      }
    }
  }

  Topology& t_;
  std::vector<std::vector<uint8_t>> fed_;
  std::vector<std::vector<uint32_t>> free_;
};

std::shared_ptr<const Topology> Topology::Build(size_t n_inputs) {
  auto [cols, rows] = GateDims(n_inputs);
  PSA_ENFORCE(n_inputs <= (size_t{1} << 31), "network too large: {}",
              n_inputs);
  auto t = std::make_shared<Topology>(Topology());
  t->n_ = n_inputs;
  t->cols_ = cols;
  t->rows_ = rows;
  Builder(*t).Run();
  return t;
}

}  // namespace psa::benes
