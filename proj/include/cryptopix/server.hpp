#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "cryptopix/protocol.hpp"
#include "cryptopix/transport.hpp"

namespace cryptopix {

struct ServerConfig {
  /// Largest accepted payload; larger requests get payload_too_large.
  std::uint64_t max_payload_bytes = std::uint64_t{1} << 30;
  /// Worker threads per request; 0 uses every core.
  unsigned threads = 0;
  /// Fixed seed for server-side randomness (reproducible tests only).
  std::optional<std::uint64_t> seed;
};

/// Turns one request into one response. Holds no key material beyond what
/// each request carries.
class Dispatcher {
 public:
  explicit Dispatcher(ServerConfig config = {});

  Response handle(const Request& request) const;
  /// Decodes, handles and encodes. Never throws; every failure becomes an
  /// error response.
  Bytes handle_frame(std::span<const std::uint8_t> frame) const;

  const ServerConfig& config() const { return config_; }

 private:
  Bytes run(const Request& request) const;

  ServerConfig config_;
};

/// Thread-per-connection TCP front end for a Dispatcher.
class TcpServer {
 public:
  /// Port 0 picks a free port; read it back with port().
  TcpServer(Endpoint listen, Dispatcher dispatcher);
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  void start();
  void stop();
  /// Blocks until stop() is called from another thread.
  void wait();

  std::uint16_t port() const { return port_; }
  std::size_t connections_accepted() const { return accepted_.load(); }
  std::size_t requests_handled() const { return handled_.load(); }

 private:
  void accept_loop();
  void serve(int fd);
  Bytes read_frame(int fd, std::optional<Response>& early) const;

  Endpoint listen_;
  Dispatcher dispatcher_;
  int listen_fd_ = -1;
  int wake_pipe_[2] = {-1, -1};
  std::uint16_t port_ = 0;
  std::atomic<bool> running_{false};
  std::atomic<std::size_t> accepted_{0};
  std::atomic<std::size_t> handled_{0};
  std::thread acceptor_;
  std::mutex workers_mutex_;
  std::vector<std::thread> workers_;
};

}  // namespace cryptopix
