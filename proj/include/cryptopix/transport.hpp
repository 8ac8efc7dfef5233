#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "cryptopix/bytes.hpp"
#include "cryptopix/errors.hpp"
#include "cryptopix/protocol.hpp"

namespace cryptopix {

/// Environment variable holding the default server endpoint (host:port).
inline constexpr const char* kAddressEnv = "CRYPTOPIX_ADDR";

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;

  /// "host:port"; throws ParameterError.
  static Endpoint parse(std::string_view text);
  std::string to_string() const;
};

std::optional<Endpoint> endpoint_from_env();

/// The server could not be reached or the connection broke mid-exchange.
class ConnectionError : public Error {
 public:
  using Error::Error;
};

/// One request frame out, one response frame back. `round_trips` counts every
/// completed exchange.
class Transport {
 public:
  virtual ~Transport() = default;

  Response request(const Request& request);
  std::size_t round_trips() const { return round_trips_.load(); }

 protected:
  virtual Bytes exchange(std::span<const std::uint8_t> frame) = 0;

 private:
  std::atomic<std::size_t> round_trips_{0};
};

/// In-process transport that hands encoded frames straight to a handler.
class LoopbackTransport final : public Transport {
 public:
  using Handler = std::function<Bytes(std::span<const std::uint8_t>)>;
  explicit LoopbackTransport(Handler handler) : handler_(std::move(handler)) {}

 protected:
  Bytes exchange(std::span<const std::uint8_t> frame) override;

 private:
  Handler handler_;
};

/// One TCP connection per request: send the frame, half-close, read the
/// response until the server closes.
class TcpTransport final : public Transport {
 public:
  explicit TcpTransport(Endpoint endpoint) : endpoint_(std::move(endpoint)) {}

  /// Bytes sent and received on the wire by the last exchange.
  std::size_t last_bytes_sent() const { return last_sent_; }
  std::size_t last_bytes_received() const { return last_received_; }

 protected:
  Bytes exchange(std::span<const std::uint8_t> frame) override;

 private:
  Endpoint endpoint_;
  std::size_t last_sent_ = 0;
  std::size_t last_received_ = 0;
};

}  // namespace cryptopix
