#include "socket_io.hpp"

#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>

#include <cerrno>
#include <cstring>
#include <string>

namespace cryptopix::detail {
namespace {

std::string errno_text() { return std::strerror(errno); }

struct AddrInfo {
  addrinfo* list = nullptr;
  ~AddrInfo() {
    if (list != nullptr) {
      ::freeaddrinfo(list);
    }
  }
};

AddrInfo resolve(const Endpoint& endpoint, bool passive) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) {
    hints.ai_flags = AI_PASSIVE;
  }
  AddrInfo info;
  const std::string port = std::to_string(endpoint.port);
  if (int rc = ::getaddrinfo(endpoint.host.c_str(), port.c_str(), &hints, &info.list); rc != 0) {
    throw ConnectionError("cannot resolve " + endpoint.to_string() + ": " + ::gai_strerror(rc));
  }
  return info;
}

}  // namespace

Socket connect_to(const Endpoint& endpoint) {
  AddrInfo info = resolve(endpoint, false);
  std::string last_error = "no addresses";
  for (addrinfo* ai = info.list; ai != nullptr; ai = ai->ai_next) {
    Socket s(::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol));
    if (!s) {
      last_error = errno_text();
      continue;
    }
    if (::connect(s.get(), ai->ai_addr, ai->ai_addrlen) == 0) {
      return s;
    }
    last_error = errno_text();
  }
  throw ConnectionError("cannot connect to " + endpoint.to_string() + ": " + last_error);
}

Socket listen_on(const Endpoint& endpoint, int backlog) {
  AddrInfo info = resolve(endpoint, true);
  std::string last_error = "no addresses";
  for (addrinfo* ai = info.list; ai != nullptr; ai = ai->ai_next) {
    Socket s(::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol));
    if (!s) {
      last_error = errno_text();
      continue;
    }
    int one = 1;
    ::setsockopt(s.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(s.get(), ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(s.get(), backlog) == 0) {
      return s;
    }
    last_error = errno_text();
  }
  throw ConnectionError("cannot listen on " + endpoint.to_string() + ": " + last_error);
}

std::uint16_t local_port(const Socket& socket) {
  sockaddr_storage addr{};
  socklen_t len = sizeof addr;
  if (::getsockname(socket.get(), reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
    throw ConnectionError("getsockname failed: " + errno_text());
  }
  if (addr.ss_family == AF_INET6) {
    return ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port);
  }
  return ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
}

void write_all(int fd, std::span<const std::uint8_t> bytes) {
  std::size_t sent = 0;
  while (sent < bytes.size()) {
    ssize_t n = ::send(fd, bytes.data() + sent, bytes.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) {
        continue;
      }
      throw ConnectionError("send failed: " + errno_text());
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::size_t read_up_to(int fd, std::uint8_t* out, std::size_t count) {
  std::size_t got = 0;
  while (got < count) {
    ssize_t n = ::recv(fd, out + got, count - got, 0);
    if (n < 0) {
      if (errno == EINTR) {
        continue;
      }
      throw ConnectionError("recv failed: " + errno_text());
    }
    if (n == 0) {
      break;
    }
    got += static_cast<std::size_t>(n);
  }
  return got;
}

Bytes read_to_eof(int fd) {
  Bytes out;
  std::uint8_t buf[1 << 16];
  for (;;) {
    ssize_t n = ::recv(fd, buf, sizeof buf, 0);
    if (n < 0) {
      if (errno == EINTR) {
        continue;
      }
      throw ConnectionError("recv failed: " + errno_text());
    }
    if (n == 0) {
      return out;
    }
    out.insert(out.end(), buf, buf + n);
  }
}

void drain(int fd, int timeout_ms) {
  std::uint8_t buf[4096];
  for (;;) {
    pollfd p{fd, POLLIN, 0};
    int ready = ::poll(&p, 1, timeout_ms);
    if (ready <= 0) {
      return;
    }
    ssize_t n = ::recv(fd, buf, sizeof buf, 0);
    if (n <= 0) {
      return;
    }
  }
}

}  // namespace cryptopix::detail
