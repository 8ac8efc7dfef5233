#include "cryptopix/server.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "cryptopix/secure_ops.hpp"
#include "socket_io.hpp"

namespace cryptopix {
namespace {

/// Upper bound on the params block; keys and kernels are far smaller.
constexpr std::uint32_t kMaxParamsBytes = 1u << 24;

Response error_response(Status status, const std::string& message) {
  Response r;
  r.status = status;
  r.message = message;
  return r;
}

void require_key(const PublicKey& pk, const Fingerprint& key, const char* what) {
  if (key != pk.fingerprint()) {
    throw KeyMismatchError(std::string(what) + " was encrypted under key " + to_hex(key) +
                           ", request carries key " + to_hex(pk.fingerprint()));
  }
}

EncryptedImage payload_image(const PublicKey& pk, std::span<const std::uint8_t> payload) {
  EncryptedImage image;
  try {
    image = deserialize_image(payload);
  } catch (const FormatError& e) {
    throw ProtocolError(Status::bad_params, std::string("payload: ") + e.what());
  }
  require_key(pk, image.key, "payload image");
  return image;
}

}  // namespace

Dispatcher::Dispatcher(ServerConfig config) : config_(config) {}

Bytes Dispatcher::run(const Request& request) const {
  DecodedParams decoded = decode_params(request.op_id, request.params);
  const PublicKey& pk = decoded.key;
  auto rng = make_entropy(config_.seed);
  ExecOptions options{config_.threads, rng.get()};

  return std::visit(
      [&](const auto& p) -> Bytes {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, EqualizeParams>) {
          EncryptedNumbers histogram;
          try {
            histogram = deserialize_numbers(request.payload);
          } catch (const FormatError& e) {
            throw ProtocolError(Status::bad_params, std::string("payload: ") + e.what());
          }
          require_key(pk, histogram.key, "payload histogram");
          return serialize(
              op_equalize_transform(pk, histogram, p.levels, p.width, p.height, options));
        } else {
          EncryptedImage image = payload_image(pk, request.payload);
          if constexpr (std::is_same_v<T, NegateParams>) {
            return serialize(op_negate(pk, image, options));
          } else if constexpr (std::is_same_v<T, BrightnessParams>) {
            require_key(pk, p.value.key_fingerprint(), "brightness value");
            return serialize(op_brightness(pk, image, p.value, options));
          } else if constexpr (std::is_same_v<T, ConvolveParams>) {
            return serialize(op_convolve(pk, image, p.kernel, options));
          } else if constexpr (std::is_same_v<T, GradientParams>) {
            auto [gx, gy] = op_gradient(pk, image, p.horizontal, p.vertical, options);
            return encode_image_pair(gx, gy);
          } else if constexpr (std::is_same_v<T, SharpenParams>) {
            return serialize(op_sharpen(pk, image, p.k, p.lpf, options));
          } else {
            static_assert(std::is_same_v<T, MorphParams>);
            return serialize(op_morph_sum(pk, image, p.element, options));
          }
        }
      },
      decoded.params);
}

Response Dispatcher::handle(const Request& request) const {
  if (request.version != kProtocolVersion) {
    return error_response(Status::unsupported_version,
                          "frame version " + std::to_string(request.version));
  }
  if (request.payload.size() > config_.max_payload_bytes) {
    return error_response(Status::payload_too_large,
                          std::to_string(request.payload.size()) + " bytes exceeds limit of " +
                              std::to_string(config_.max_payload_bytes));
  }
  try {
    Response r;
    r.payload = run(request);
    return r;
  } catch (const ProtocolError& e) {
    return error_response(e.status(), e.what());
  } catch (const KeyMismatchError& e) {
    return error_response(Status::key_mismatch, e.what());
  } catch (const ShapeError& e) {
    return error_response(Status::bad_params, e.what());
  } catch (const ParameterError& e) {
    return error_response(Status::bad_params, e.what());
  } catch (const RangeError& e) {
    return error_response(Status::bad_params, e.what());
  } catch (const MalformedCiphertextError& e) {
    return error_response(Status::bad_params, e.what());
  } catch (const std::exception& e) {
    return error_response(Status::processing_error, e.what());
  }
}

Bytes Dispatcher::handle_frame(std::span<const std::uint8_t> frame) const {
  try {
    return encode_response(handle(decode_request(frame)));
  } catch (const ProtocolError& e) {
    return encode_response(error_response(e.status(), e.what()));
  } catch (const std::exception& e) {
    return encode_response(error_response(Status::processing_error, e.what()));
  }
}

TcpServer::TcpServer(Endpoint listen, Dispatcher dispatcher)
    : listen_(std::move(listen)), dispatcher_(std::move(dispatcher)) {}

TcpServer::~TcpServer() { stop(); }

void TcpServer::start() {
  if (running_) {
    return;
  }
  detail::Socket socket = detail::listen_on(listen_);
  port_ = detail::local_port(socket);
  if (::pipe2(wake_pipe_, O_CLOEXEC) != 0) {
    throw ConnectionError(std::string("pipe failed: ") + std::strerror(errno));
  }
  listen_fd_ = socket.release();
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
}

void TcpServer::stop() {
  if (!running_.exchange(false)) {
    return;
  }
  const char byte = 0;
  [[maybe_unused]] auto n = ::write(wake_pipe_[1], &byte, 1);
  if (acceptor_.joinable()) {
    acceptor_.join();
  }
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(workers_mutex_);
    workers.swap(workers_);
  }
  for (auto& t : workers) {
    t.join();
  }
  ::close(listen_fd_);
  ::close(wake_pipe_[0]);
  ::close(wake_pipe_[1]);
  listen_fd_ = wake_pipe_[0] = wake_pipe_[1] = -1;
}

void TcpServer::wait() {
  while (running_) {
    pollfd p{wake_pipe_[0], POLLIN, 0};
    ::poll(&p, 1, 200);
  }
}

void TcpServer::accept_loop() {
  while (running_) {
    pollfd fds[2] = {{listen_fd_, POLLIN, 0}, {wake_pipe_[0], POLLIN, 0}};
    if (::poll(fds, 2, -1) < 0) {
      if (errno == EINTR) {
        continue;
      }
      return;
    }
    if (fds[1].revents != 0) {
      return;
    }
    if ((fds[0].revents & POLLIN) == 0) {
      continue;
    }
    int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) {
      continue;
    }
    ++accepted_;
    std::lock_guard lock(workers_mutex_);
    workers_.emplace_back([this, fd] { serve(fd); });
  }
}

Bytes TcpServer::read_frame(int fd, std::optional<Response>& early) const {
  Bytes frame(kFrameHeaderSize);
  if (detail::read_up_to(fd, frame.data(), frame.size()) != frame.size()) {
    early = error_response(Status::malformed_frame, "truncated frame header");
    return {};
  }
  if (!std::equal(kFrameMagic.begin(), kFrameMagic.end(), frame.begin())) {
    early = error_response(Status::malformed_frame, "bad frame magic");
    return {};
  }
  if (frame[4] != kProtocolVersion) {
    early = error_response(Status::unsupported_version,
                           "frame version " + std::to_string(frame[4]));
    return {};
  }
  ByteReader header(std::span<const std::uint8_t>(frame).subspan(7, 4));
  const std::uint32_t params_length = header.u32();
  if (params_length > kMaxParamsBytes) {
    early = error_response(Status::malformed_frame, "params block too large");
    return {};
  }
  const std::size_t params_end = frame.size() + params_length;
  frame.resize(params_end + 8);
  if (detail::read_up_to(fd, frame.data() + kFrameHeaderSize, params_length + 8) !=
      params_length + 8) {
    early = error_response(Status::malformed_frame, "truncated frame");
    return {};
  }
  ByteReader length(std::span<const std::uint8_t>(frame).subspan(params_end, 8));
  const std::uint64_t payload_length = length.u64();
  if (payload_length > dispatcher_.config().max_payload_bytes) {
    early = error_response(Status::payload_too_large,
                           std::to_string(payload_length) + " bytes exceeds limit of " +
                               std::to_string(dispatcher_.config().max_payload_bytes));
    return {};
  }
  frame.resize(frame.size() + payload_length);
  if (detail::read_up_to(fd, frame.data() + params_end + 8, payload_length) != payload_length) {
    early = error_response(Status::malformed_frame, "truncated payload");
    return {};
  }
  return frame;
}

void TcpServer::serve(int fd) {
  detail::Socket socket(fd);
  try {
    std::optional<Response> early;
    Bytes frame = read_frame(fd, early);
    Bytes reply = early ? encode_response(*early) : dispatcher_.handle_frame(frame);
    detail::write_all(fd, reply);
    ++handled_;
    ::shutdown(fd, SHUT_WR);
    detail::drain(fd, 2000);
  } catch (const std::exception&) {
    // Connection-level failure; nothing left to tell the peer.
  }
}

}  // namespace cryptopix
