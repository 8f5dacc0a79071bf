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

#include "psa/net/frame.h"

#include <algorithm>
#include <limits>

#include "psa/base/exception.h"

namespace psa::net {

bool IsKnownMsgType(uint8_t raw) {
  return raw >= static_cast<uint8_t>(MsgType::kOtR2S) &&
         raw <= static_cast<uint8_t>(MsgType::kControl);
}

std::string_view MsgTypeName(MsgType t) {
  switch (t) {
    case MsgType::kOtR2S:
      return "OT_R2S";
    case MsgType::kOtS2R:
      return "OT_S2R";
    case MsgType::kMaskedVec:
      return "MASKED_VEC";
    case MsgType::kRho2:
      return "RHO2";
    case MsgType::kOprfRAndAPrime:
      return "OPRF_R_AND_APRIME";
    case MsgType::kDealerVole:
      return "DEALER_VOLE";
    case MsgType::kPrfVec:
      return "PRF_VEC";
    case MsgType::kShareVec:
      return "SHARE_VEC";
    case MsgType::kKeyExchange:
      return "KEYX";
    case MsgType::kControl:
      return "CONTROL";
  }
  return "UNKNOWN";
}

void EncodeHeader(MsgType type, size_t payload_size,
                  std::array<uint8_t, kFrameHeaderSize>& out) {
  if (payload_size > std::numeric_limits<uint32_t>::max()) {
    PSA_THROW(TransportError, "frame payload of {} bytes exceeds 2^32-1",
              payload_size);
  }
  out[0] = static_cast<uint8_t>(type);
  PutU32BE(MutableByteSpan(out).subspan(1),
           static_cast<uint32_t>(payload_size));
}

Bytes EncodeFrame(const Frame& f) {
  std::array<uint8_t, kFrameHeaderSize> header;
  EncodeHeader(f.type, f.payload.size(), header);
  Bytes out(f.encoded_size());
  std::copy(header.begin(), header.end(), out.begin());
  std::copy(f.payload.begin(), f.payload.end(),
            out.begin() + kFrameHeaderSize);
  return out;
}

Frame DecodeFrame(ByteSpan in, size_t* consumed) {
  if (in.size() < kFrameHeaderSize) {
    PSA_THROW(TransportError, "truncated frame header: {} bytes", in.size());
  }
  if (!IsKnownMsgType(in[0])) {
    PSA_THROW(TransportError, "unknown frame type 0x{:02x}", in[0]);
  }
  const uint32_t len = GetU32BE(in.subspan(1));
  if (in.size() - kFrameHeaderSize < len) {
    PSA_THROW(TransportError, "truncated frame: header says {} bytes, have {}",
              len, in.size() - kFrameHeaderSize);
  }
  Frame f;
  f.type = static_cast<MsgType>(in[0]);
  auto body = in.subspan(kFrameHeaderSize, len);
  f.payload.assign(body.begin(), body.end());
  if (consumed != nullptr) {
    *consumed = kFrameHeaderSize + len;
  }
  return f;
}

}  // namespace psa::net
