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

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "psa/base/exception.h"
#include "psa/net/channel.h"

namespace psa::net {

namespace {

sockaddr_in Resolve(const std::string& host, uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const int rc = ::getaddrinfo(host.c_str(), nullptr, &hints, &res);
  if (rc != 0 || res == nullptr) {
    PSA_THROW(TransportError, "cannot resolve '{}': {}", host,
              ::gai_strerror(rc));
  }
  sockaddr_in addr;
  std::memcpy(&addr, res->ai_addr, sizeof(addr));
  ::freeaddrinfo(res);
  addr.sin_port = htons(port);
  return addr;
}

[[noreturn]] void ThrowErrno(const char* what) {
  PSA_THROW(TransportError, "{}: {}", what, std::strerror(errno));
}

class TcpEndpoint final : public Endpoint {
 public:
  explicit TcpEndpoint(int fd) : fd_(fd) {
    int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  }
  ~TcpEndpoint() override { ::close(fd_); }

  void Close() override { ::shutdown(fd_, SHUT_RDWR); }

 protected:
  void SendFrame(Frame frame) override {
    std::array<uint8_t, kFrameHeaderSize> header;
    EncodeHeader(frame.type, frame.payload.size(), header);
    WriteAll(header);
    WriteAll(frame.payload);
  }

  Frame RecvFrame() override {
    std::array<uint8_t, kFrameHeaderSize> header;
    ReadAll(header);
    if (!IsKnownMsgType(header[0])) {
      PSA_THROW(TransportError, "unknown frame type 0x{:02x}", header[0]);
    }
    Frame f;
    f.type = static_cast<MsgType>(header[0]);
    f.payload.resize(GetU32BE(ByteSpan(header).subspan(1)));
    ReadAll(f.payload);
    return f;
  }

 private:
  void WriteAll(ByteSpan data) {
    size_t off = 0;
    while (off < data.size()) {
      const ssize_t n =
          ::send(fd_, data.data() + off, data.size() - off, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        ThrowErrno("tcp send");
      }
      off += static_cast<size_t>(n);
    }
  }

  void ReadAll(MutableByteSpan out) {
    size_t off = 0;
    while (off < out.size()) {
      const ssize_t n = ::recv(fd_, out.data() + off, out.size() - off, 0);
      if (n < 0) {
        if (errno == EINTR) continue;
        ThrowErrno("tcp recv");
      }
      if (n == 0) {
        PSA_THROW(TransportError, "tcp connection closed by peer");
      }
      off += static_cast<size_t>(n);
    }
  }

  int fd_;
};

}  // namespace

TcpListener::TcpListener(const std::string& host, uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) ThrowErrno("socket");
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = Resolve(host, port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    const int saved = errno;
    ::close(fd_);
    errno = saved;
    ThrowErrno("bind");
  }
  if (::listen(fd_, 4) != 0) {
    const int saved = errno;
    ::close(fd_);
    errno = saved;
    ThrowErrno("listen");
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

EndpointPtr TcpListener::Accept() {
  for (;;) {
    const int fd = ::accept(fd_, nullptr, nullptr);
    if (fd >= 0) return std::make_unique<TcpEndpoint>(fd);
    if (errno != EINTR) ThrowErrno("accept");
  }
}

EndpointPtr TcpConnect(const std::string& host, uint16_t port,
                       std::chrono::milliseconds wait) {
  const sockaddr_in addr = Resolve(host, port);
  const auto deadline = std::chrono::steady_clock::now() + wait;
  for (;;) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) ThrowErrno("socket");
    if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof(addr)) ==
        0) {
      return std::make_unique<TcpEndpoint>(fd);
    }
    const int saved = errno;
    ::close(fd);
    if (std::chrono::steady_clock::now() >= deadline) {
      errno = saved;
      ThrowErrno("connect");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
}

}  // namespace psa::net
