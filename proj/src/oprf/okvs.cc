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

#include "psa/oprf/okvs.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string_view>
#include <unordered_set>

#include "psa/base/exception.h"

namespace psa::oprf {

size_t OkvsParams::SlotsFor(size_t n) const {
  return static_cast<size_t>(std::ceil(expansion * static_cast<double>(n))) +
         band_width;
}

void OkvsParams::Validate() const {
  PSA_ENFORCE(band_width >= 16 && band_width <= 64,
              "band width {} outside [16, 64]", band_width);
  PSA_ENFORCE(expansion >= 1.0, "expansion {} below 1", expansion);
  PSA_ENFORCE(max_retries >= 1, "max_retries must be positive");
}

OkvsHasher::OkvsHasher(const PrfKey& r, size_t slots, size_t band_width)
    : hash_(r), slots_(slots), band_width_(band_width) {
  PSA_ENFORCE(slots_ >= band_width_, "{} slots cannot hold a {}-bit band",
              slots_, band_width_);
}

OkvsRow OkvsHasher::Row(ByteSpan key) const {
  const Block h = hash_(key);
  OkvsRow row;
  row.band = band_width_ == 64 ? h.lo : h.lo & ((1ULL << band_width_) - 1);
  if (row.band == 0) row.band = 1;
  row.start = static_cast<size_t>(h.hi % (slots_ - band_width_ + 1));
  return row;
}

F128 OkvsDecode(std::span<const F128> p, const OkvsRow& row) {
  F128 acc;
  uint64_t band = row.band;
  while (band != 0) {
    const int k = std::countr_zero(band);
    acc += p[row.start + k];
    band &= band - 1;
  }
  return acc;
}

F128 OkvsDecode(std::span<const F128> p, const OkvsHasher& hasher,
                ByteSpan key) {
  PSA_ENFORCE(p.size() == hasher.slots(), "encoding has {} slots, expected {}",
              p.size(), hasher.slots());
  return OkvsDecode(p, hasher.Row(key));
}

namespace {

void CheckDistinct(std::span<const Bytes> keys) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(keys.size());
  for (const auto& k : keys) {
    std::string_view v(reinterpret_cast<const char*>(k.data()), k.size());
    if (!seen.insert(v).second) {
      PSA_THROW(InvalidArgument, "duplicate OKVS key {}", ToHex(k));
    }
  }
}

}  // namespace

std::optional<std::vector<F128>> OkvsTryEncode(std::span<const Bytes> keys,
                                               std::span<const F128> values,
                                               const PrfKey& r,
                                               const OkvsParams& params,
                                               RandomSource& rng) {
  params.Validate();
  PSA_ENFORCE(keys.size() == values.size(), "{} keys but {} values",
              keys.size(), values.size());
  CheckDistinct(keys);
  const size_t m = params.SlotsFor(keys.size());
  OkvsHasher hasher(r, m, params.band_width);

  std::vector<OkvsRow> rows(keys.size());
  for (size_t i = 0; i < keys.size(); ++i) rows[i] = hasher.Row(keys[i]);
  std::vector<uint32_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    return rows[a].start < rows[b].start;
  });

  // Pivot rows are kept normalized so their lowest set bit is the pivot slot.
  std::vector<uint64_t> pivot_band(m, 0);
  std::vector<F128> pivot_value(m);
  for (uint32_t idx : order) {
    size_t start = rows[idx].start;
    uint64_t band = rows[idx].band;
    F128 value = values[idx];
    for (;;) {
      if (band == 0) {
        if (!value.IsZero()) return std::nullopt;
        break;
      }
      const int tz = std::countr_zero(band);
      start += tz;
      band >>= tz;
      if (pivot_band[start] == 0) {
        pivot_band[start] = band;
        pivot_value[start] = value;
        break;
      }
      band ^= pivot_band[start];
      value += pivot_value[start];
    }
  }

  std::vector<F128> p(m);
  for (size_t s = m; s-- > 0;) {
    const uint64_t band = pivot_band[s];
    if (band == 0) {
      p[s] = F128(rng.NextBlock());
      continue;
    }
    // Every other bit of a pivot row points above s, already solved.
    p[s] = pivot_value[s] + OkvsDecode(p, OkvsRow{s, band & ~1ULL});
  }
  return p;
}

OkvsEncoding OkvsEncode(std::span<const Bytes> keys,
                        std::span<const F128> values, const OkvsParams& params,
                        RandomSource& rng, size_t* attempts) {
  params.Validate();
  for (size_t t = 1; t <= params.max_retries; ++t) {
    PrfKey r;
    rng.Fill(r.bytes);
    auto p = OkvsTryEncode(keys, values, r, params, rng);
    if (p.has_value()) {
      if (attempts != nullptr) *attempts = t;
      return {r, std::move(*p)};
    }
  }
  PSA_THROW(Error, "OKVS encoding of {} keys failed after {} attempts",
            keys.size(), params.max_retries);
}

}  // namespace psa::oprf
