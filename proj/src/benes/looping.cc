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

#include "psa/benes/looping.h"

#include <array>
#include <utility>

#include "psa/base/counters.h"
#include "psa/base/exception.h"

namespace psa::benes {

namespace {

class Looping {
 public:
  Looping(SwitchProgram& prog, ProgramStats& stats)
      : prog_(prog), topo_(prog.topology()), stats_(stats) {}

  void Run(int32_t idx, const std::vector<Index>& perm) {
    const SubNetwork& node = topo_.subnetworks()[idx];
    ++stats_.subnetworks;
    switch (node.kind) {
      case SubNetwork::Kind::kSwitch2:
        prog_.set_bit(node.col_begin, node.row_begin, perm[0] != 0);
        stats_.steps += 2;
        return;
      case SubNetwork::Kind::kBlock3:
        ProgramBlock3(node, perm);
        stats_.steps += 3;
        return;
      case SubNetwork::Kind::kRecursive:
        break;
    }

    const Index n = node.size;
    const Index n1 = n / 2;
    const Index n2 = n - n1;
    const bool odd = (n % 2) == 1;

    std::vector<Index> inv(n);
    for (Index o = 0; o < n; ++o) {
      inv[perm[o]] = o;
    }

    // color 0: the wire goes through the upper half, 1: lower half.
    std::vector<int8_t> color(n, -1);
    if (odd) {
      // The unpaired last wire is hardwired to the lower half on both sides.
      Paint(n - 1, 1, perm, inv, color);
    }
    for (Index v = 0; v < n; ++v) {
      if (color[v] < 0) {
        Paint(v, 0, perm, inv, color);
      }
    }

    const uint32_t r0 = node.row_begin;
    std::vector<Index> upper(n1);
    std::vector<Index> lower(n2);
    for (Index k = 0; k < n1; ++k) {
      if (color[2 * k] == color[2 * k + 1]) ++stats_.split_violations;
      prog_.set_bit(node.col_begin, r0 + k, color[2 * k] == 1);

      const Index s0 = perm[2 * k];
      const Index s1 = perm[2 * k + 1];
      if (color[s0] == color[s1]) ++stats_.split_violations;
      prog_.set_bit(node.col_end, r0 + k, color[s0] == 1);
      if (color[s0] == 0) {
        upper[k] = s0 >> 1;
        lower[k] = s1 >> 1;
      } else {
        upper[k] = s1 >> 1;
        lower[k] = s0 >> 1;
      }
    }
    if (odd) {
      if (color[n - 1] != 1 || color[perm[n - 1]] != 1) {
        ++stats_.split_violations;
      }
      lower[n2 - 1] = perm[n - 1] >> 1;
    }
    stats_.steps += n;

    Run(node.upper, upper);
    Run(node.lower, lower);
  }

 private:
  // Explicit-stack DFS; neighbours get the opposite color.
  void Paint(Index start, int8_t c, const std::vector<Index>& perm,
             const std::vector<Index>& inv, std::vector<int8_t>& color) {
    const Index n = static_cast<Index>(perm.size());
    stack_.clear();
    stack_.emplace_back(start, c);
    while (!stack_.empty()) {
      auto [v, vc] = stack_.back();
      stack_.pop_back();
      if (color[v] >= 0) {
        continue;
      }
      color[v] = vc;
      ++stats_.steps;
      const int8_t other = static_cast<int8_t>(vc ^ 1);
      // Input-side dual.
      const Index dual = v ^ 1;
      if (dual < n && color[dual] < 0) {
        stack_.emplace_back(dual, other);
      }
      // Source of the output dual to v's output.
      const Index out_dual = inv[v] ^ 1;
      if (out_dual < n) {
        const Index w = perm[out_dual];
        if (color[w] < 0) {
          stack_.emplace_back(w, other);
        }
      }
    }
  }

  // Exhaustive search over the 8 settings of the 3-gate block.
  void ProgramBlock3(const SubNetwork& node, const std::vector<Index>& perm) {
    for (int s = 0; s < 8; ++s) {
      const bool g0 = s & 1;
      const bool g1 = s & 2;
      const bool g2 = s & 4;
      Index a0 = g0 ? 1 : 0;
      Index a1 = g0 ? 0 : 1;
      Index b0 = g1 ? 2 : a1;
      Index b1 = g1 ? a1 : 2;
      Index o0 = g2 ? b0 : a0;
      Index o1 = g2 ? a0 : b0;
      if (o0 == perm[0] && o1 == perm[1] && b1 == perm[2]) {
        prog_.set_bit(node.col_begin, node.row_begin, g0);
        prog_.set_bit(node.col_begin + 1, node.row_begin, g1);
        prog_.set_bit(node.col_end, node.row_begin, g2);
        return;
      }
    }
    PSA_THROW(Error, "3-input block cannot realize the requested permutation");
  }

  SwitchProgram& prog_;
  const Topology& topo_;
  ProgramStats& stats_;
  std::vector<std::pair<Index, int8_t>> stack_;
};

}  // namespace

SwitchProgram Program(std::shared_ptr<const Topology> topology,
                      const Permutation& perm, ProgramStats* stats) {
  PSA_ENFORCE(topology != nullptr, "null topology");
  if (perm.size() != topology->n_inputs()) {
    PSA_THROW(InvalidArgument, "permutation of size {} for a {}-input network",
              perm.size(), topology->n_inputs());
  }
  GlobalWorkCounters().looping_calls.fetch_add(1, std::memory_order_relaxed);
  SwitchProgram prog(std::move(topology));
  ProgramStats local;
  Looping(prog, stats != nullptr ? *stats : local).Run(0, perm.map());
  return prog;
}

ColoringGraphSummary AnalyzeColoringGraph(const Permutation& perm) {
  const Index n = static_cast<Index>(perm.size());
  std::vector<Index> inv(n);
  for (Index o = 0; o < n; ++o) {
    inv[perm[o]] = o;
  }
  auto neighbours = [&](Index v) {
    std::array<Index, 2> out{n, n};
    if ((v ^ 1) < n) out[0] = v ^ 1;
    if ((inv[v] ^ 1) < n) out[1] = perm[inv[v] ^ 1];
    return out;
  };

  ColoringGraphSummary summary;
  std::vector<bool> seen(n, false);
  std::vector<Index> stack;
  for (Index s = 0; s < n; ++s) {
    if (seen[s]) continue;
    size_t vertices = 0;
    size_t leaves = 0;
    size_t degree_sum = 0;
    stack.assign(1, s);
    seen[s] = true;
    while (!stack.empty()) {
      Index v = stack.back();
      stack.pop_back();
      ++vertices;
      size_t degree = 0;
      for (Index w : neighbours(v)) {
        if (w == n) continue;
        ++degree;
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
      degree_sum += degree;
      if (degree == 1) ++leaves;
    }
    if (degree_sum == 0) {
      ++summary.isolated;
    } else if (leaves > 0) {
      ++summary.chains;
    } else if (vertices % 2 == 0) {
      ++summary.even_cycles;
    } else {
      ++summary.odd_cycles;
    }
  }
  return summary;
}

}  // namespace psa::benes
