#include "sep/tcp.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

namespace sep {

namespace {

void set_recv_timeout(int fd, std::chrono::milliseconds timeout) {
  timeval tv{};
  tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
  tv.tv_usec = static_cast<suseconds_t>(timeout.count() % 1000 * 1000);
  setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
}

// Reads exactly `len` bytes. Returns false on clean EOF with nothing read;
// any other short read is a transport failure.
bool read_exact(int fd, std::uint8_t* buf, std::size_t len, bool* timed_out) {
  std::size_t done = 0;
  while (done < len) {
    ssize_t got = ::read(fd, buf + done, len - done);
    if (got > 0) {
      done += static_cast<std::size_t>(got);
      continue;
    }
    if (got == 0) {
      if (done == 0) return false;
      fail(Errc::transport_failure, "connection closed mid-frame");
    }
    if (errno == EINTR) continue;
    if (errno == EAGAIN || errno == EWOULDBLOCK) {
      if (done == 0) {
        *timed_out = true;
        return false;
      }
      fail(Errc::transport_failure, "timed out mid-frame");
    }
    fail(Errc::transport_failure, std::string("read: ") + std::strerror(errno));
  }
  return true;
}

sockaddr_in make_addr(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    fail(Errc::transport_failure, "unparseable IPv4 address: " + host);
  }
  return addr;
}

}  // namespace

TcpChannel::TcpChannel(int fd) : fd_(fd) {
  int one = 1;
  setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

TcpChannel::~TcpChannel() { close(); }

void TcpChannel::send(const Message& msg) {
  if (fd_ < 0) fail(Errc::transport_failure, "send on closed channel");
  std::vector<std::uint8_t> frame = encode(msg);
  std::size_t done = 0;
  while (done < frame.size()) {
    ssize_t sent = ::send(fd_, frame.data() + done, frame.size() - done, MSG_NOSIGNAL);
    if (sent < 0) {
      if (errno == EINTR) continue;
      fail(Errc::transport_failure, std::string("send: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(sent);
  }
}

RecvStatus TcpChannel::recv(Message& out, std::chrono::milliseconds timeout) {
  if (fd_ < 0) return RecvStatus::closed;
  set_recv_timeout(fd_, timeout);
  std::uint8_t header[4];
  bool timed_out = false;
  if (!read_exact(fd_, header, 4, &timed_out)) {
    return timed_out ? RecvStatus::timeout : RecvStatus::closed;
  }
  std::uint32_t length = std::uint32_t{header[0]} << 24 | std::uint32_t{header[1]} << 16 |
                         std::uint32_t{header[2]} << 8 | std::uint32_t{header[3]};
  if (length > kMaxPayload) fail(Errc::oversize_frame, "peer announced oversized frame");
  std::vector<std::uint8_t> frame(4 + length);
  std::memcpy(frame.data(), header, 4);
  if (length > 0 && !read_exact(fd_, frame.data() + 4, length, &timed_out)) {
    fail(Errc::transport_failure, "connection closed mid-frame");
  }
  out = decode(frame);
  return RecvStatus::ok;
}

void TcpChannel::close() {
  if (fd_ >= 0) {
    ::shutdown(fd_, SHUT_RDWR);
    ::close(fd_);
    fd_ = -1;
  }
}

TcpListener::TcpListener(std::uint16_t port, const std::string& bind_host) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) fail(Errc::transport_failure, "socket creation failed");
  int one = 1;
  setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr = make_addr(bind_host, port);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0) {
    fail(Errc::transport_failure, std::string("bind: ") + std::strerror(errno));
  }
  if (::listen(fd_, 8) < 0) {
    fail(Errc::transport_failure, std::string("listen: ") + std::strerror(errno));
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  getsockname(fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<TcpChannel> TcpListener::accept(std::chrono::milliseconds timeout) {
  set_recv_timeout(fd_, timeout);
  while (true) {
    int client = ::accept(fd_, nullptr, nullptr);
    if (client >= 0) return std::make_unique<TcpChannel>(client);
    if (errno == EINTR) continue;
    if (errno == EAGAIN || errno == EWOULDBLOCK) {
      fail(Errc::transport_failure, "timed out waiting for a connection");
    }
    fail(Errc::transport_failure, std::string("accept: ") + std::strerror(errno));
  }
}

std::unique_ptr<TcpChannel> tcp_connect(const std::string& host, std::uint16_t port,
                                        std::chrono::milliseconds timeout) {
  sockaddr_in addr = make_addr(host, port);
  auto deadline = std::chrono::steady_clock::now() + timeout;
  while (true) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0) fail(Errc::transport_failure, "socket creation failed");
    if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0) {
      return std::make_unique<TcpChannel>(fd);
    }
    ::close(fd);
    if (std::chrono::steady_clock::now() >= deadline) {
      fail(Errc::transport_failure, "connect to " + host + ":" + std::to_string(port) +
                                        " timed out");
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
}

std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint) {
  auto colon = endpoint.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= endpoint.size()) {
    fail(Errc::invalid_input, "endpoint must look like host:port");
  }
  int port = std::stoi(endpoint.substr(colon + 1));
  if (port < 0 || port > 65535) fail(Errc::invalid_input, "port out of range");
  return {endpoint.substr(0, colon), static_cast<std::uint16_t>(port)};
}

}  // namespace sep
