#pragma once

#include <memory>
#include <string>

#include "sep/wire.hpp"

namespace sep {

// Channel over a connected socket, speaking the frame format.
class TcpChannel : public Channel {
 public:
  explicit TcpChannel(int fd);
  ~TcpChannel() override;

  TcpChannel(const TcpChannel&) = delete;
  TcpChannel& operator=(const TcpChannel&) = delete;

  void send(const Message& msg) override;
  RecvStatus recv(Message& out, std::chrono::milliseconds timeout) override;
  void close() override;

 private:
  int fd_;
};

class TcpListener {
 public:
  // Binds and listens on the given port; port 0 picks a free one.
  explicit TcpListener(std::uint16_t port, const std::string& bind_host = "0.0.0.0");
  ~TcpListener();

  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const { return port_; }

  std::unique_ptr<TcpChannel> accept(std::chrono::milliseconds timeout);

 private:
  int fd_;
  std::uint16_t port_;
};

// Connects with retries until the deadline; the peer may still be starting.
std::unique_ptr<TcpChannel> tcp_connect(const std::string& host, std::uint16_t port,
                                        std::chrono::milliseconds timeout);

// "host:port" -> (host, port)
std::pair<std::string, std::uint16_t> parse_endpoint(const std::string& endpoint);

}  // namespace sep
