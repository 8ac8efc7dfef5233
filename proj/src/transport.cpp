#include "cryptopix/transport.hpp"

#include <charconv>
#include <cstdlib>

#include "socket_io.hpp"

namespace cryptopix {

Endpoint Endpoint::parse(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon + 1 == text.size()) {
    throw ParameterError("endpoint must look like host:port, got '" + std::string(text) + "'");
  }
  std::string_view host = text.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') {
    host = host.substr(1, host.size() - 2);
  }
  std::string_view digits = text.substr(colon + 1);
  unsigned port = 0;
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc() || end != digits.data() + digits.size() || port > 65535) {
    throw ParameterError("invalid port in '" + std::string(text) + "'");
  }
  return Endpoint{host.empty() ? std::string("0.0.0.0") : std::string(host),
                  static_cast<std::uint16_t>(port)};
}

std::string Endpoint::to_string() const { return host + ":" + std::to_string(port); }

std::optional<Endpoint> endpoint_from_env() {
  const char* value = std::getenv(kAddressEnv);
  if (value == nullptr || *value == '\0') {
    return std::nullopt;
  }
  return Endpoint::parse(value);
}

Response Transport::request(const Request& request) {
  Bytes reply = exchange(encode_request(request));
  ++round_trips_;
  return decode_response(reply);
}

Bytes LoopbackTransport::exchange(std::span<const std::uint8_t> frame) { return handler_(frame); }

Bytes TcpTransport::exchange(std::span<const std::uint8_t> frame) {
  detail::Socket socket = detail::connect_to(endpoint_);
  detail::write_all(socket.get(), frame);
  ::shutdown(socket.get(), SHUT_WR);
  Bytes reply = detail::read_to_eof(socket.get());
  last_sent_ = frame.size();
  last_received_ = reply.size();
  if (reply.empty()) {
    throw ConnectionError("server closed the connection without a response");
  }
  return reply;
}

}  // namespace cryptopix
