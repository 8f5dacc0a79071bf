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
#include <memory>
#include <span>
#include <string>

#include "psa/base/bytes.h"
#include "psa/crypto/random.h"
#include "psa/net/channel.h"

namespace psa::ot {

enum class OtMode { kGroup, kDealer };

std::string_view OtModeName(OtMode mode);
OtMode ParseOtMode(std::string_view name);

// A batch of 1-out-of-2 message pairs, stored flat: instance i occupies
// bytes [i*msg_len, (i+1)*msg_len) of m0 and m1.
class OtMessages {
 public:
  OtMessages() = default;
  OtMessages(size_t count, size_t msg_len);

  size_t count() const { return count_; }
  size_t msg_len() const { return msg_len_; }

  MutableByteSpan m0(size_t i) { return {m0_.data() + i * msg_len_, msg_len_}; }
  MutableByteSpan m1(size_t i) { return {m1_.data() + i * msg_len_, msg_len_}; }
  ByteSpan m0(size_t i) const { return {m0_.data() + i * msg_len_, msg_len_}; }
  ByteSpan m1(size_t i) const { return {m1_.data() + i * msg_len_, msg_len_}; }

 private:
  size_t count_ = 0;
  size_t msg_len_ = 0;
  Bytes m0_;
  Bytes m1_;
};

// Choice bits are stored one per byte (0 or 1).
using ChoiceBits = std::vector<uint8_t>;

Bytes PackBits(std::span<const uint8_t> bits);
ChoiceBits UnpackBits(ByteSpan packed, size_t count);

// Random-OT pads from a trusted dealer. The sender holds (r0, r1); the
// receiver holds a random choice c and r_c. Each object may be consumed once.
class OtSenderPads {
 public:
  size_t count() const { return count_; }
  size_t msg_len() const { return msg_len_; }
  bool consumed() const { return consumed_; }

 private:
  friend std::pair<OtSenderPads, class OtReceiverPads> DealerOtSetup(
      size_t, size_t, RandomSource&);
  friend void DealerOtSend(OtSenderPads&, const OtMessages&, net::Endpoint&);

  size_t count_ = 0;
  size_t msg_len_ = 0;
  Bytes r0_;
  Bytes r1_;
  bool consumed_ = false;
};

class OtReceiverPads {
 public:
  size_t count() const { return count_; }
  size_t msg_len() const { return msg_len_; }
  bool consumed() const { return consumed_; }

 private:
  friend std::pair<OtSenderPads, OtReceiverPads> DealerOtSetup(size_t, size_t,
                                                              RandomSource&);
  friend Bytes DealerOtReceive(OtReceiverPads&, std::span<const uint8_t>,
                               net::Endpoint&);

  size_t count_ = 0;
  size_t msg_len_ = 0;
  ChoiceBits c_;
  Bytes rc_;
  bool consumed_ = false;
};

std::pair<OtSenderPads, OtReceiverPads> DealerOtSetup(size_t count,
                                                      size_t msg_len,
                                                      RandomSource& rng);

// Derandomizes the pads: the receiver sends e = b ^ c (packed bits), the
// sender answers with (m0 ^ r_e, m1 ^ r_{1^e}).
void DealerOtSend(OtSenderPads& pads, const OtMessages& msgs,
                  net::Endpoint& ch);
Bytes DealerOtReceive(OtReceiverPads& pads, std::span<const uint8_t> choices,
                      net::Endpoint& ch);

// Simplest OT over ristretto255. Sender: one group element, then two
// ciphertexts per instance. Receiver: one group element per instance.
void GroupOtSend(const OtMessages& msgs, net::Endpoint& ch, RandomSource& rng);
Bytes GroupOtReceive(std::span<const uint8_t> choices, size_t msg_len,
                     net::Endpoint& ch, RandomSource& rng);

// Either mode behind one interface. Dealer providers on both sides must be
// built from the same dealer seed and session label; each batch consumes a
// fresh set of pads.
class OtProvider {
 public:
  virtual ~OtProvider() = default;
  virtual OtMode mode() const = 0;
  virtual void Send(const OtMessages& msgs, net::Endpoint& ch) = 0;
  // Returns count * msg_len bytes, instance-major.
  virtual Bytes Receive(std::span<const uint8_t> choices, size_t msg_len,
                        net::Endpoint& ch) = 0;
};

std::unique_ptr<OtProvider> MakeGroupOt(RandomSource rng);
std::unique_ptr<OtProvider> MakeDealerOt(const Seed& dealer_seed,
                                         std::string session);

}  // namespace psa::ot
