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

#include "psa/cli/he_estimate.h"

#include "psa/base/exception.h"

namespace psa::cli {

void HeCostModel::Validate() const {
  PSA_ENFORCE(encrypt_ms > 0 && scalar_mul_ms > 0 && decrypt_ms > 0 &&
                  keygen_ms > 0 && key_size_bits > 0,
              "HE cost model constants must be positive");
}

HeEstimate EstimateHe(uint64_t n, double alpha, double bits_per_second,
                      const HeCostModel& model) {
  model.Validate();
  PSA_ENFORCE(bits_per_second > 0, "bandwidth must be positive");
  const double nn = static_cast<double>(n);
  HeEstimate out;
  out.comm_bits = 2 * nn * static_cast<double>(model.key_size_bits) *
                  (1.0 + 2 * alpha);
  out.comm_bytes = out.comm_bits / 8;
  const double compute_ms =
      nn * ((1 + alpha) * model.encrypt_ms + alpha * model.scalar_mul_ms +
            alpha * model.decrypt_ms) +
      model.keygen_ms;
  const double delay_s = out.comm_bits / bits_per_second;
  out.runtime_s = 2 * (compute_ms / 1000 + delay_s);
  return out;
}

}  // namespace psa::cli
