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

#include "psa/base/bytes.h"

#include "psa/base/exception.h"

namespace psa {

void XorInto(MutableByteSpan dst, ByteSpan src) {
  PSA_ENFORCE(dst.size() == src.size(), "xor size mismatch {} vs {}",
              dst.size(), src.size());
  for (size_t i = 0; i < dst.size(); ++i) {
    dst[i] ^= src[i];
  }
}

void XorTo(MutableByteSpan out, ByteSpan a, ByteSpan b) {
  PSA_ENFORCE(out.size() == a.size() && a.size() == b.size(),
              "xor size mismatch");
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] = a[i] ^ b[i];
  }
}

std::string ToHex(ByteSpan data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(data.size() * 2, '0');
  for (size_t i = 0; i < data.size(); ++i) {
    out[2 * i] = kDigits[data[i] >> 4];
    out[2 * i + 1] = kDigits[data[i] & 0xf];
  }
  return out;
}

namespace {
int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

Bytes FromHex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    PSA_THROW(InvalidArgument, "hex string has odd length {}", hex.size());
  }
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    int hi = HexValue(hex[2 * i]);
    int lo = HexValue(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      PSA_THROW(InvalidArgument, "invalid hex digit near offset {}", 2 * i);
    }
    out[i] = static_cast<uint8_t>((hi << 4) | lo);
  }
  return out;
}

void PutU32BE(MutableByteSpan out, uint32_t v) {
  out[0] = static_cast<uint8_t>(v >> 24);
  out[1] = static_cast<uint8_t>(v >> 16);
  out[2] = static_cast<uint8_t>(v >> 8);
  out[3] = static_cast<uint8_t>(v);
}

uint32_t GetU32BE(ByteSpan in) {
  return (uint32_t{in[0]} << 24) | (uint32_t{in[1]} << 16) |
         (uint32_t{in[2]} << 8) | uint32_t{in[3]};
}

void ByteWriter::U32(uint32_t v) {
  uint8_t tmp[4];
  PutU32BE(tmp, v);
  Raw(tmp);
}

void ByteWriter::Blob(ByteSpan data) {
  PSA_ENFORCE(data.size() <= UINT32_MAX, "blob too large");
  U32(static_cast<uint32_t>(data.size()));
  Raw(data);
}

uint8_t ByteReader::U8() { return Raw(1)[0]; }

uint32_t ByteReader::U32() { return GetU32BE(Raw(4)); }

ByteSpan ByteReader::Raw(size_t n) {
  if (remaining() < n) {
    PSA_THROW(ProtocolAbort, "payload truncated: need {} bytes, have {}", n,
              remaining());
  }
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

ByteSpan ByteReader::Blob() { return Raw(U32()); }

void ByteReader::ExpectEnd() const {
  if (remaining() != 0) {
    PSA_THROW(ProtocolAbort, "payload has {} trailing bytes", remaining());
  }
}

}  // namespace psa
