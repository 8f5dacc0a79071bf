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

#include <array>
#include <cstdint>
#include <string_view>

#include "psa/base/bytes.h"

namespace psa::net {

// Wire tag of every frame. Values are part of the wire format.
enum class MsgType : uint8_t {
  kOtR2S = 1,
  kOtS2R = 2,
  kMaskedVec = 3,
  kRho2 = 4,
  kOprfRAndAPrime = 5,
  kDealerVole = 6,
  kPrfVec = 7,
  kShareVec = 8,
  kKeyExchange = 9,
  kControl = 10,
};

inline constexpr size_t kMsgTypeCount = 11;  // index 0 unused
inline constexpr size_t kFrameHeaderSize = 5;

bool IsKnownMsgType(uint8_t raw);
std::string_view MsgTypeName(MsgType t);

// type (1 byte) || payload length (u32 big-endian) || payload.
struct Frame {
  MsgType type = MsgType::kControl;
  Bytes payload;

  size_t encoded_size() const { return kFrameHeaderSize + payload.size(); }
  bool operator==(const Frame&) const = default;
};

Bytes EncodeFrame(const Frame& f);
void EncodeHeader(MsgType type, size_t payload_size,
                  std::array<uint8_t, kFrameHeaderSize>& out);

// Parses one frame from the front of `in`. Throws TransportError on a short
// buffer or an unregistered type byte. `consumed` receives 5 + length.
Frame DecodeFrame(ByteSpan in, size_t* consumed = nullptr);

}  // namespace psa::net
