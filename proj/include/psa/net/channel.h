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
#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>

#include "psa/net/frame.h"

namespace psa::net {

struct ChannelStats {
  uint64_t bytes_sent = 0;
  uint64_t bytes_received = 0;
  std::array<uint64_t, kMsgTypeCount> frames_sent_by_type{};
  std::array<uint64_t, kMsgTypeCount> frames_received_by_type{};
  // Encoded bytes, headers included.
  std::array<uint64_t, kMsgTypeCount> bytes_sent_by_type{};
  std::array<uint64_t, kMsgTypeCount> bytes_received_by_type{};

  uint64_t frames_sent(MsgType t) const {
    return frames_sent_by_type[static_cast<size_t>(t)];
  }
  uint64_t frames_received(MsgType t) const {
    return frames_received_by_type[static_cast<size_t>(t)];
  }
  uint64_t bytes_sent_of(MsgType t) const {
    return bytes_sent_by_type[static_cast<size_t>(t)];
  }
  uint64_t bytes_received_of(MsgType t) const {
    return bytes_received_by_type[static_cast<size_t>(t)];
  }
  uint64_t total_frames_sent() const;
  uint64_t total_frames_received() const;

  ChannelStats operator-(const ChannelStats& earlier) const;
  ChannelStats& operator+=(const ChannelStats& o);
};

// One side of an ordered, reliable, bidirectional frame channel. Sending from
// one thread while receiving on another is allowed; concurrent senders are
// not.
class Endpoint {
 public:
  virtual ~Endpoint() = default;

  void Send(Frame frame);
  void Send(MsgType type, Bytes payload) {
    Send(Frame{type, std::move(payload)});
  }
  Frame Recv();
  // Receives one frame and checks its type; a mismatch aborts the protocol.
  Bytes Recv(MsgType expected);

  // Wakes a peer blocked in Recv with a TransportError.
  virtual void Close() = 0;

  ChannelStats stats() const;

 protected:
  virtual void SendFrame(Frame frame) = 0;
  virtual Frame RecvFrame() = 0;

 private:
  std::atomic<uint64_t> bytes_sent_{0};
  std::atomic<uint64_t> bytes_received_{0};
  std::array<std::atomic<uint64_t>, kMsgTypeCount> sent_by_type_{};
  std::array<std::atomic<uint64_t>, kMsgTypeCount> received_by_type_{};
  std::array<std::atomic<uint64_t>, kMsgTypeCount> sent_bytes_by_type_{};
  std::array<std::atomic<uint64_t>, kMsgTypeCount> received_bytes_by_type_{};
};

using EndpointPtr = std::unique_ptr<Endpoint>;

// Delays sends so the long-run rate stays at `bits_per_second`. A single
// send larger than the burst allowance goes into debt and sleeps it off.
class TokenBucket {
 public:
  TokenBucket(double bits_per_second, double burst_bits);

  void Consume(double bits);

 private:
  using Clock = std::chrono::steady_clock;

  double rate_;
  double capacity_;
  double tokens_;
  Clock::time_point last_;
};

struct ChannelSpec {
  enum class Kind { kMemory, kTcp, kThrottled };

  Kind kind = Kind::kMemory;
  std::string host = "127.0.0.1";
  uint16_t port = 0;  // 0 picks an ephemeral port
  double bits_per_second = 0;

  static ChannelSpec Memory() { return {}; }
  static ChannelSpec Tcp(std::string host, uint16_t port) {
    return {Kind::kTcp, std::move(host), port, 0};
  }
  static ChannelSpec Throttled(double bits_per_second) {
    return {Kind::kThrottled, {}, 0, bits_per_second};
  }
};

std::pair<EndpointPtr, EndpointPtr> OpenPair(const ChannelSpec& spec);

std::pair<EndpointPtr, EndpointPtr> OpenMemoryPair();
// Wraps an endpoint so that its sends are paced by a token bucket.
EndpointPtr Throttle(EndpointPtr inner, double bits_per_second);

class TcpListener {
 public:
  TcpListener(const std::string& host, uint16_t port);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  uint16_t port() const { return port_; }
  EndpointPtr Accept();

 private:
  int fd_ = -1;
  uint16_t port_ = 0;
};

// Retries until the peer listens or `wait` elapses.
EndpointPtr TcpConnect(const std::string& host, uint16_t port,
                       std::chrono::milliseconds wait =
                           std::chrono::milliseconds(10000));

// "host:port" -> (host, port). Throws InvalidArgument.
std::pair<std::string, uint16_t> ParseAddress(const std::string& addr);

}  // namespace psa::net
