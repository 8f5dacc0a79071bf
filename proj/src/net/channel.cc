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

#include "psa/net/channel.h"

#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>

#include "psa/base/exception.h"

namespace psa::net {

uint64_t ChannelStats::total_frames_sent() const {
  uint64_t t = 0;
  for (auto v : frames_sent_by_type) t += v;
  return t;
}

uint64_t ChannelStats::total_frames_received() const {
  uint64_t t = 0;
  for (auto v : frames_received_by_type) t += v;
  return t;
}

ChannelStats ChannelStats::operator-(const ChannelStats& earlier) const {
  ChannelStats d;
  d.bytes_sent = bytes_sent - earlier.bytes_sent;
  d.bytes_received = bytes_received - earlier.bytes_received;
  for (size_t i = 0; i < kMsgTypeCount; ++i) {
    d.frames_sent_by_type[i] =
        frames_sent_by_type[i] - earlier.frames_sent_by_type[i];
    d.frames_received_by_type[i] =
        frames_received_by_type[i] - earlier.frames_received_by_type[i];
    d.bytes_sent_by_type[i] =
        bytes_sent_by_type[i] - earlier.bytes_sent_by_type[i];
    d.bytes_received_by_type[i] =
        bytes_received_by_type[i] - earlier.bytes_received_by_type[i];
  }
  return d;
}

ChannelStats& ChannelStats::operator+=(const ChannelStats& o) {
  bytes_sent += o.bytes_sent;
  bytes_received += o.bytes_received;
  for (size_t i = 0; i < kMsgTypeCount; ++i) {
    frames_sent_by_type[i] += o.frames_sent_by_type[i];
    frames_received_by_type[i] += o.frames_received_by_type[i];
    bytes_sent_by_type[i] += o.bytes_sent_by_type[i];
    bytes_received_by_type[i] += o.bytes_received_by_type[i];
  }
  return *this;
}

void Endpoint::Send(Frame frame) {
  const auto size = frame.encoded_size();
  const auto type = static_cast<size_t>(frame.type);
  SendFrame(std::move(frame));
  bytes_sent_.fetch_add(size, std::memory_order_relaxed);
  sent_by_type_[type].fetch_add(1, std::memory_order_relaxed);
  sent_bytes_by_type_[type].fetch_add(size, std::memory_order_relaxed);
}

Frame Endpoint::Recv() {
  Frame f = RecvFrame();
  const auto size = f.encoded_size();
  const auto type = static_cast<size_t>(f.type);
  bytes_received_.fetch_add(size, std::memory_order_relaxed);
  received_by_type_[type].fetch_add(1, std::memory_order_relaxed);
  received_bytes_by_type_[type].fetch_add(size, std::memory_order_relaxed);
  return f;
}

Bytes Endpoint::Recv(MsgType expected) {
  Frame f = Recv();
  if (f.type != expected) {
    PSA_THROW(ProtocolAbort, "expected {} frame, got {}",
              MsgTypeName(expected), MsgTypeName(f.type));
  }
  return std::move(f.payload);
}

ChannelStats Endpoint::stats() const {
  ChannelStats s;
  s.bytes_sent = bytes_sent_.load(std::memory_order_relaxed);
  s.bytes_received = bytes_received_.load(std::memory_order_relaxed);
  for (size_t i = 0; i < kMsgTypeCount; ++i) {
    s.frames_sent_by_type[i] = sent_by_type_[i].load(std::memory_order_relaxed);
    s.frames_received_by_type[i] =
        received_by_type_[i].load(std::memory_order_relaxed);
    s.bytes_sent_by_type[i] =
        sent_bytes_by_type_[i].load(std::memory_order_relaxed);
    s.bytes_received_by_type[i] =
        received_bytes_by_type_[i].load(std::memory_order_relaxed);
  }
  return s;
}

TokenBucket::TokenBucket(double bits_per_second, double burst_bits)
    : rate_(bits_per_second),
      capacity_(burst_bits),
      tokens_(burst_bits),
      last_(Clock::now()) {
  PSA_ENFORCE(bits_per_second > 0, "rate must be positive");
  PSA_ENFORCE(burst_bits > 0, "burst must be positive");
}

void TokenBucket::Consume(double bits) {
  const auto now = Clock::now();
  tokens_ = std::min(
      capacity_,
      tokens_ + std::chrono::duration<double>(now - last_).count() * rate_);
  last_ = now;
  tokens_ -= bits;
  if (tokens_ < 0) {
    std::this_thread::sleep_for(
        std::chrono::duration<double>(-tokens_ / rate_));
  }
}

namespace {

// One direction of an in-memory pair.
struct Pipe {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<Frame> queue;
  bool closed = false;

  void Push(Frame f) {
    {
      std::lock_guard lock(mu);
      if (closed) {
        PSA_THROW(TransportError, "send on closed in-memory channel");
      }
      queue.push_back(std::move(f));
    }
    cv.notify_one();
  }

  Frame Pop() {
    std::unique_lock lock(mu);
    cv.wait(lock, [&] { return !queue.empty() || closed; });
    if (queue.empty()) {
      PSA_THROW(TransportError, "in-memory channel closed by peer");
    }
    Frame f = std::move(queue.front());
    queue.pop_front();
    return f;
  }

  void Close() {
    {
      std::lock_guard lock(mu);
      closed = true;
    }
    cv.notify_all();
  }
};

class MemoryEndpoint final : public Endpoint {
 public:
  MemoryEndpoint(std::shared_ptr<Pipe> out, std::shared_ptr<Pipe> in)
      : out_(std::move(out)), in_(std::move(in)) {}
  ~MemoryEndpoint() override { Close(); }

  void Close() override {
    out_->Close();
    in_->Close();
  }

 protected:
  void SendFrame(Frame frame) override { out_->Push(std::move(frame)); }
  Frame RecvFrame() override { return in_->Pop(); }

 private:
  std::shared_ptr<Pipe> out_;
  std::shared_ptr<Pipe> in_;
};

class ThrottledEndpoint final : public Endpoint {
 public:
  ThrottledEndpoint(EndpointPtr inner, double bits_per_second)
      : inner_(std::move(inner)),
        bucket_(bits_per_second,
                std::max(bits_per_second * 0.005, 1500.0 * 8)) {}

  void Close() override { inner_->Close(); }

 protected:
  void SendFrame(Frame frame) override {
    bucket_.Consume(static_cast<double>(frame.encoded_size()) * 8);
    inner_->Send(std::move(frame));
  }
  Frame RecvFrame() override { return inner_->Recv(); }

 private:
  EndpointPtr inner_;
  TokenBucket bucket_;
};

}  // namespace

std::pair<EndpointPtr, EndpointPtr> OpenMemoryPair() {
  auto ab = std::make_shared<Pipe>();
  auto ba = std::make_shared<Pipe>();
  return {std::make_unique<MemoryEndpoint>(ab, ba),
          std::make_unique<MemoryEndpoint>(ba, ab)};
}

EndpointPtr Throttle(EndpointPtr inner, double bits_per_second) {
  return std::make_unique<ThrottledEndpoint>(std::move(inner), bits_per_second);
}

std::pair<EndpointPtr, EndpointPtr> OpenPair(const ChannelSpec& spec) {
  switch (spec.kind) {
    case ChannelSpec::Kind::kMemory:
      return OpenMemoryPair();
    case ChannelSpec::Kind::kThrottled: {
      auto [a, b] = OpenMemoryPair();
      return {Throttle(std::move(a), spec.bits_per_second),
              Throttle(std::move(b), spec.bits_per_second)};
    }
    case ChannelSpec::Kind::kTcp: {
      TcpListener listener(spec.host, spec.port);
      EndpointPtr client;
      std::exception_ptr err;
      std::thread t([&] {
        try {
          client = TcpConnect(spec.host, listener.port());
        } catch (...) {
          err = std::current_exception();
        }
      });
      EndpointPtr server;
      try {
        server = listener.Accept();
      } catch (...) {
        t.join();
        throw;
      }
      t.join();
      if (err) std::rethrow_exception(err);
      return {std::move(server), std::move(client)};
    }
  }
  PSA_THROW(InvalidArgument, "unknown channel kind");
}

std::pair<std::string, uint16_t> ParseAddress(const std::string& addr) {
  const auto colon = addr.rfind(':');
  PSA_ENFORCE(colon != std::string::npos && colon > 0 &&
                  colon + 1 < addr.size(),
              "address '{}' is not host:port", addr);
  const std::string host = addr.substr(0, colon);
  unsigned long port = 0;
  try {
    size_t pos = 0;
    port = std::stoul(addr.substr(colon + 1), &pos);
    PSA_ENFORCE(pos == addr.size() - colon - 1, "bad port in '{}'", addr);
  } catch (const std::logic_error&) {
    PSA_THROW(InvalidArgument, "bad port in '{}'", addr);
  }
  PSA_ENFORCE(port <= 65535, "port out of range in '{}'", addr);
  return {host, static_cast<uint16_t>(port)};
}

}  // namespace psa::net
