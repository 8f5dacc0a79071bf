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

#include "psa/crypto/sharing.h"

#include "psa/base/exception.h"

namespace psa {

ShareVector::ShareVector(size_t width_bytes, size_t rows)
    : width_(width_bytes), rows_(rows), data_(width_bytes * rows) {}

ByteSpan ShareVector::Row(size_t i) const {
  PSA_ENFORCE(i < size(), "row {} out of range {}", i, size());
  return ByteSpan(data_).subspan(i * width_, width_);
}

MutableByteSpan ShareVector::MutableRow(size_t i) {
  PSA_ENFORCE(i < size(), "row {} out of range {}", i, size());
  return MutableByteSpan(data_).subspan(i * width_, width_);
}

void ShareVector::Append(ByteSpan row) {
  PSA_ENFORCE(row.size() == width_, "row width {} != {}", row.size(), width_);
  data_.insert(data_.end(), row.begin(), row.end());
  ++rows_;
}

std::pair<Bytes, Bytes> ShareSplit(ByteSpan x, RandomSource& rng) {
  Bytes first = rng.NextBytes(x.size());
  Bytes second(x.size());
  XorTo(second, x, first);
  return {std::move(first), std::move(second)};
}

std::pair<ShareVector, ShareVector> ShareSplit(const ShareVector& x,
                                               RandomSource& rng) {
  ShareVector first(x.width(), x.size());
  ShareVector second(x.width(), x.size());
  if (x.width() > 0) {
    rng.Fill(first.mutable_data());
    XorTo(second.mutable_data(), x.data(), first.data());
  }
  return {std::move(first), std::move(second)};
}

Bytes Reveal(ByteSpan a, ByteSpan b) {
  Bytes out(a.size());
  XorTo(out, a, b);
  return out;
}

ShareVector Reveal(const ShareVector& a, const ShareVector& b) {
  PSA_ENFORCE(a.width() == b.width() && a.size() == b.size(),
              "share shape mismatch: {}x{} vs {}x{}", a.size(), a.width(),
              b.size(), b.width());
  ShareVector out(a.width(), a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    XorTo(out.MutableRow(i), a.Row(i), b.Row(i));
  }
  return out;
}

}  // namespace psa
