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

#include <utility>

#include "psa/base/bytes.h"
#include "psa/crypto/random.h"

namespace psa {

// A column of fixed-width rows; used both for plaintext attribute vectors and
// for one party's XOR shares of such a vector.
class ShareVector {
 public:
  ShareVector() = default;
  ShareVector(size_t width_bytes, size_t rows);

  size_t width() const { return width_; }
  size_t size() const { return width_ == 0 ? rows_ : data_.size() / width_; }
  bool empty() const { return size() == 0; }

  ByteSpan Row(size_t i) const;
  MutableByteSpan MutableRow(size_t i);
  void Append(ByteSpan row);

  const Bytes& data() const { return data_; }
  MutableByteSpan mutable_data() { return data_; }
  bool operator==(const ShareVector&) const = default;

 private:
  size_t width_ = 0;
  // Row count is tracked separately only for zero-width vectors.
  size_t rows_ = 0;
  Bytes data_;
};

// (r, x ^ r) with r uniform.
std::pair<Bytes, Bytes> ShareSplit(ByteSpan x, RandomSource& rng);
std::pair<ShareVector, ShareVector> ShareSplit(const ShareVector& x,
                                               RandomSource& rng);

// Row-wise XOR of two shares of identical shape.
Bytes Reveal(ByteSpan a, ByteSpan b);
ShareVector Reveal(const ShareVector& a, const ShareVector& b);

}  // namespace psa
