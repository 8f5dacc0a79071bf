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

#include <memory>

#include "psa/benes/switch_program.h"
#include "psa/crypto/random.h"
#include "psa/crypto/sharing.h"
#include "psa/net/channel.h"
#include "psa/ot/ot.h"
#include "psa/perm/permutation.h"

namespace psa::osn {

// Shape both parties agree on before the offline phase.
struct MosnConfig {
  // Sender vector length.
  size_t m = 0;
  // Bytes per sender row.
  size_t value_width = 16;
  // Lane width in bits; rows wider than one lane use several lanes that share
  // the switch program.
  size_t label_bits = 128;

  size_t lanes() const;
  size_t label_width() const { return lanes() * label_bits / 8; }
  // Networks need at least two wires; a single row is padded.
  size_t network_size() const { return m < 2 ? 2 : m; }
  void Validate() const;
};

// Receiver state after the offline phase: the secret bijection, its switch
// settings and one OT output per used gate.
class MosnReceiverOffline {
 public:
  const MosnConfig& config() const { return config_; }
  const Permutation& rho1() const { return rho1_; }
  const benes::SwitchProgram* program() const { return program_.get(); }
  size_t ot_instances() const { return ot_instances_; }
  bool consumed() const { return consumed_; }

 private:
  friend MosnReceiverOffline MosnOfflineReceiver(const MosnConfig&,
                                                 ot::OtProvider&,
                                                 net::Endpoint&,
                                                 RandomSource&);
  friend ShareVector MosnOnlineReceiver(MosnReceiverOffline&,
                                        const Injection&, net::Endpoint&);

  MosnConfig config_;
  Permutation rho1_;
  std::unique_ptr<benes::SwitchProgram> program_;
  Bytes ot_outputs_;
  size_t ot_instances_ = 0;
  bool consumed_ = false;
};

// Sender state: input-column masks A(0, .) and output-column masks B(R, .).
class MosnSenderOffline {
 public:
  const MosnConfig& config() const { return config_; }
  size_t ot_instances() const { return ot_instances_; }
  bool consumed() const { return consumed_; }

 private:
  friend MosnSenderOffline MosnOfflineSender(const MosnConfig&,
                                             ot::OtProvider&, net::Endpoint&,
                                             RandomSource&);
  friend ShareVector MosnOnlineSender(MosnSenderOffline&, const ShareVector&,
                                      net::Endpoint&);

  MosnConfig config_;
  Bytes first_masks_;
  Bytes last_masks_;
  size_t ot_instances_ = 0;
  bool consumed_ = false;
};

// Offline: the receiver samples rho1 and programs the network; the sender
// draws wire labels; one OT per used gate delivers the corrections.
MosnReceiverOffline MosnOfflineReceiver(const MosnConfig& config,
                                        ot::OtProvider& ot, net::Endpoint& ch,
                                        RandomSource& rng);
MosnSenderOffline MosnOfflineSender(const MosnConfig& config,
                                    ot::OtProvider& ot, net::Endpoint& ch,
                                    RandomSource& rng);

// Online: the sender masks its vector, the receiver evaluates, derives
// rho2 = rho1^-1 . pi and sends it. Each side returns its share of
// (u[pi(i)])_i, value_width bytes per row.
ShareVector MosnOnlineReceiver(MosnReceiverOffline& state, const Injection& pi,
                               net::Endpoint& ch);
ShareVector MosnOnlineSender(MosnSenderOffline& state, const ShareVector& u,
                             net::Endpoint& ch);

// Wire helpers for the two online payloads.
Bytes EncodeIndexVector(std::span<const Index> v);
std::vector<Index> DecodeIndexVector(ByteSpan payload);

}  // namespace psa::osn
