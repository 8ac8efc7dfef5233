#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "cryptopix/bytes.hpp"
#include "cryptopix/encoding.hpp"
#include "cryptopix/errors.hpp"
#include "cryptopix/image.hpp"
#include "cryptopix/kernels.hpp"
#include "cryptopix/paillier.hpp"
#include "cryptopix/secure_ops.hpp"

// Single-round wire protocol. All integers are big-endian.
//
//   request  = "CPX1" | version u8 | op_id u16  | params_len u32 | params
//                     | payload_len u64 | payload
//   response = "CPX1" | version u8 | status u16 | message_len u32 | message
//                     | payload_len u64 | payload
//
// params starts with the caller's public key (u32 length + CPXK blob),
// followed by the op-specific block.

namespace cryptopix {

inline constexpr std::string_view kFrameMagic = "CPX1";
inline constexpr std::uint8_t kProtocolVersion = 1;
/// magic + version + op/status + params length
inline constexpr std::size_t kFrameHeaderSize = 4 + 1 + 2 + 4;

enum class Status : std::uint16_t {
  ok = 0,
  malformed_frame = 1,
  unsupported_version = 2,
  unknown_op = 3,
  bad_params = 4,
  key_mismatch = 5,
  payload_too_large = 6,
  processing_error = 7,
};

std::string_view to_string(Status status);

/// Error carried by a non-ok response or raised while decoding a frame.
class ProtocolError : public Error {
 public:
  ProtocolError(Status status, const std::string& message)
      : Error(std::string(to_string(status)) + ": " + message), status_(status) {}
  Status status() const { return status_; }

 private:
  Status status_;
};

struct Request {
  std::uint8_t version = kProtocolVersion;
  std::uint16_t op_id = 0;
  Bytes params;
  Bytes payload;

  friend bool operator==(const Request&, const Request&) = default;
};

struct Response {
  std::uint8_t version = kProtocolVersion;
  Status status = Status::ok;
  std::string message;
  Bytes payload;

  friend bool operator==(const Response&, const Response&) = default;
};

Bytes encode_request(const Request& request);
/// Throws ProtocolError(malformed_frame / unsupported_version).
Request decode_request(std::span<const std::uint8_t> frame);
Bytes encode_response(const Response& response);
Response decode_response(std::span<const std::uint8_t> frame);

struct NegateParams {};
struct BrightnessParams {
  EncryptedNumber value;
};
struct ConvolveParams {
  Kernel kernel;
};
struct GradientParams {
  Kernel horizontal;
  Kernel vertical;
};
struct SharpenParams {
  double k = 1.0;
  Kernel lpf;
};
struct MorphParams {
  StructuringElement element;
};
struct EqualizeParams {
  std::uint32_t levels = 256;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
};

using OpParams = std::variant<NegateParams, BrightnessParams, ConvolveParams, GradientParams,
                              SharpenParams, MorphParams, EqualizeParams>;

OpId op_id_of(const OpParams& params);

/// Public key blob followed by the op-specific block. Kernel weights and k
/// travel as shortest round-trip decimal strings.
Bytes encode_params(const PublicKey& pk, const OpParams& params);

struct DecodedParams {
  PublicKey key;
  OpParams params;
};

/// Throws ProtocolError(unknown_op / bad_params).
DecodedParams decode_params(std::uint16_t op_id, std::span<const std::uint8_t> bytes);

/// Two u64 length-prefixed encrypted images (gradient responses).
Bytes encode_image_pair(const EncryptedImage& first, const EncryptedImage& second);
std::pair<EncryptedImage, EncryptedImage> decode_image_pair(std::span<const std::uint8_t> bytes);

}  // namespace cryptopix
