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

#include <optional>
#include <span>
#include <vector>

#include "psa/base/bytes.h"
#include "psa/crypto/gf128.h"
#include "psa/crypto/prf.h"
#include "psa/crypto/random.h"

namespace psa::oprf {

struct OkvsParams {
  size_t band_width = 64;
  double expansion = 1.28;
  size_t max_retries = 16;

  size_t SlotsFor(size_t n) const;
  void Validate() const;
};

// A row of the linear system: bit k of `band` selects slot start + k.
struct OkvsRow {
  size_t start = 0;
  uint64_t band = 0;

  bool operator==(const OkvsRow&) const = default;
};

// Maps keys to rows under randomness r. Both the start offset and the band
// come from one MMO evaluation keyed by r.
class OkvsHasher {
 public:
  OkvsHasher(const PrfKey& r, size_t slots, size_t band_width);

  OkvsRow Row(ByteSpan key) const;
  size_t slots() const { return slots_; }
  size_t band_width() const { return band_width_; }

 private:
  MmoHash hash_;
  size_t slots_;
  size_t band_width_;
};

struct OkvsEncoding {
  PrfKey r;
  std::vector<F128> p;
};

F128 OkvsDecode(std::span<const F128> p, const OkvsRow& row);
F128 OkvsDecode(std::span<const F128> p, const OkvsHasher& hasher,
                ByteSpan key);

// One attempt with a fixed r. Returns nullopt when the system is singular;
// free slots are filled from `rng`. Duplicate keys throw InvalidArgument.
std::optional<std::vector<F128>> OkvsTryEncode(std::span<const Bytes> keys,
                                               std::span<const F128> values,
                                               const PrfKey& r,
                                               const OkvsParams& params,
                                               RandomSource& rng);

// Samples r until an attempt succeeds, up to params.max_retries attempts.
// `attempts` receives the number of r values tried.
OkvsEncoding OkvsEncode(std::span<const Bytes> keys,
                        std::span<const F128> values, const OkvsParams& params,
                        RandomSource& rng, size_t* attempts = nullptr);

}  // namespace psa::oprf
