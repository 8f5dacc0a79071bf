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

namespace psa::cli {

// Per-operation costs of a Paillier-style inner join, in milliseconds, and
// the ciphertext size in bits.
struct HeCostModel {
  double encrypt_ms = 0.25;
  double scalar_mul_ms = 0.065;
  double decrypt_ms = 2.38;
  double keygen_ms = 1175.16;
  uint64_t key_size_bits = 3072;

  void Validate() const;
};

struct HeEstimate {
  double comm_bits = 0;
  double comm_bytes = 0;
  double runtime_s = 0;

  double comm_mib() const { return comm_bytes / (1024.0 * 1024.0); }
};

// comm = 2n * key_size * (1 + 2 alpha) bits;
// runtime = 2 * (n * ((1 + alpha) e + alpha s + alpha d) + kg + comm / bw).
HeEstimate EstimateHe(uint64_t n, double alpha, double bits_per_second,
                      const HeCostModel& model = {});

}  // namespace psa::cli
