#pragma once

#include <sys/socket.h>
#include <unistd.h>

#include <cstddef>
#include <cstdint>
#include <span>

#include "cryptopix/bytes.hpp"
#include "cryptopix/transport.hpp"

namespace cryptopix::detail {

class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  Socket(Socket&& other) noexcept : fd_(other.release()) {}
  Socket& operator=(Socket&& other) noexcept {
    if (this != &other) {
      reset(other.release());
    }
    return *this;
  }
  ~Socket() { reset(); }

  int get() const { return fd_; }
  explicit operator bool() const { return fd_ >= 0; }
  int release() {
    int fd = fd_;
    fd_ = -1;
    return fd;
  }
  void reset(int fd = -1) {
    if (fd_ >= 0) {
      ::close(fd_);
    }
    fd_ = fd;
  }

 private:
  int fd_ = -1;
};

Socket connect_to(const Endpoint& endpoint);
Socket listen_on(const Endpoint& endpoint, int backlog = 64);
std::uint16_t local_port(const Socket& socket);

/// Throws ConnectionError on failure.
void write_all(int fd, std::span<const std::uint8_t> bytes);
/// Reads up to `count` bytes; returns fewer only at end of stream.
std::size_t read_up_to(int fd, std::uint8_t* out, std::size_t count);
Bytes read_to_eof(int fd);
/// Discards input until the peer closes or `timeout_ms` passes without data.
void drain(int fd, int timeout_ms);

}  // namespace cryptopix::detail
