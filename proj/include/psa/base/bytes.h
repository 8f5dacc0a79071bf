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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace psa {

using Bytes = std::vector<uint8_t>;
using ByteSpan = std::span<const uint8_t>;
using MutableByteSpan = std::span<uint8_t>;

inline ByteSpan AsBytes(std::string_view s) {
  return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

// dst ^= src, element-wise. Sizes must match.
void XorInto(MutableByteSpan dst, ByteSpan src);

// out = a ^ b.
void XorTo(MutableByteSpan out, ByteSpan a, ByteSpan b);

std::string ToHex(ByteSpan data);
// Throws InvalidArgument on odd length or non-hex characters.
Bytes FromHex(std::string_view hex);

void PutU32BE(MutableByteSpan out, uint32_t v);
uint32_t GetU32BE(ByteSpan in);

// Append-only payload builder for length-prefixed wire messages.
class ByteWriter {
 public:
  void U8(uint8_t v) { buf_.push_back(v); }
  void U32(uint32_t v);
  void Raw(ByteSpan data) { buf_.insert(buf_.end(), data.begin(), data.end()); }
  // u32 length followed by the bytes.
  void Blob(ByteSpan data);

  Bytes Take() { return std::move(buf_); }
  size_t size() const { return buf_.size(); }

 private:
  Bytes buf_;
};

// Cursor over a received payload. Every read is bounds checked and throws
// ProtocolAbort when the payload is short.
class ByteReader {
 public:
  explicit ByteReader(ByteSpan data) : data_(data) {}

  uint8_t U8();
  uint32_t U32();
  ByteSpan Raw(size_t n);
  ByteSpan Blob();

  size_t remaining() const { return data_.size() - pos_; }
  void ExpectEnd() const;

 private:
  ByteSpan data_;
  size_t pos_ = 0;
};

}  // namespace psa
