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

#include "psa/benes/switch_program.h"
#include "psa/benes/topology.h"
#include "psa/perm/permutation.h"

namespace psa::benes {

struct ProgramStats {
  // Vertices colored plus sub-permutation entries written, summed over all
  // sub-networks. Grows as N log N.
  uint64_t steps = 0;
  // Dual pairs at an input or output layer whose two wires landed in the same
  // half. Always zero for a correct coloring.
  uint64_t split_violations = 0;
  uint64_t subnetworks = 0;
};

// Programs the network so that EvalPlain(prog, x)[i] == x[perm[i]].
// Splits each block by 2-coloring the dual-pair constraint graph with an
// iterative depth-first search.
SwitchProgram Program(std::shared_ptr<const Topology> topology,
                      const Permutation& perm, ProgramStats* stats = nullptr);

// Shape of the constraint graph at the outermost level: vertices are inputs,
// edges join input duals and inputs whose outputs are duals.
struct ColoringGraphSummary {
  size_t even_cycles = 0;
  size_t odd_cycles = 0;
  // Paths with two degree-one endpoints (odd N, last wire permuted).
  size_t chains = 0;
  // Degree-zero vertices (odd N, last wire fixed).
  size_t isolated = 0;
};

ColoringGraphSummary AnalyzeColoringGraph(const Permutation& perm);

}  // namespace psa::benes
