#include "cryptopix/protocol.hpp"

#include <charconv>
#include <cmath>

namespace cryptopix {
namespace {

std::string decimal(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

double parse_decimal(const std::string& text) {
  double value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value)) {
    throw ProtocolError(Status::bad_params, "invalid decimal '" + text + "'");
  }
  return value;
}

void write_kernel(ByteWriter& out, const Kernel& kernel) {
  out.u16(static_cast<std::uint16_t>(kernel.rows()));
  out.u16(static_cast<std::uint16_t>(kernel.cols()));
  for (double w : kernel.weights()) {
    out.short_string(decimal(w));
  }
  out.short_string(decimal(kernel.post_scale()));
}

Kernel read_kernel(ByteReader& in) {
  const std::uint16_t rows = in.u16();
  const std::uint16_t cols = in.u16();
  std::vector<double> weights;
  weights.reserve(static_cast<std::size_t>(rows) * cols);
  for (std::size_t i = 0; i < static_cast<std::size_t>(rows) * cols; ++i) {
    weights.push_back(parse_decimal(in.short_string()));
  }
  const double post_scale = parse_decimal(in.short_string());
  return Kernel(rows, cols, std::move(weights), post_scale);
}

Fingerprint read_fingerprint(ByteReader& in) {
  Fingerprint key{};
  auto raw = in.raw(key.size());
  std::copy(raw.begin(), raw.end(), key.begin());
  return key;
}

void write_header(ByteWriter& out, std::uint8_t version, std::uint16_t code,
                  std::span<const std::uint8_t> block) {
  out.raw(kFrameMagic);
  out.u8(version);
  out.u16(code);
  out.u32(static_cast<std::uint32_t>(block.size()));
  out.raw(block);
}

struct RawFrame {
  std::uint8_t version;
  std::uint16_t code;
  Bytes block;
  Bytes payload;
};

RawFrame decode_frame(std::span<const std::uint8_t> frame) {
  try {
    ByteReader in(frame);
    in.expect_magic(kFrameMagic, "frame");
    RawFrame out{};
    out.version = in.u8();
    if (out.version != kProtocolVersion) {
      throw ProtocolError(Status::unsupported_version,
                          "frame version " + std::to_string(out.version) + ", expected " +
                              std::to_string(kProtocolVersion));
    }
    out.code = in.u16();
    auto block = in.raw(in.u32());
    out.block.assign(block.begin(), block.end());
    const std::uint64_t payload_length = in.u64();
    if (payload_length != in.remaining()) {
      throw FormatError("payload length " + std::to_string(payload_length) + " but " +
                        std::to_string(in.remaining()) + " bytes follow");
    }
    auto payload = in.raw(static_cast<std::size_t>(payload_length));
    out.payload.assign(payload.begin(), payload.end());
    return out;
  } catch (const FormatError& e) {
    throw ProtocolError(Status::malformed_frame, e.what());
  }
}

}  // namespace

std::string_view to_string(Status status) {
  switch (status) {
    case Status::ok: return "ok";
    case Status::malformed_frame: return "malformed_frame";
    case Status::unsupported_version: return "unsupported_version";
    case Status::unknown_op: return "unknown_op";
    case Status::bad_params: return "bad_params";
    case Status::key_mismatch: return "key_mismatch";
    case Status::payload_too_large: return "payload_too_large";
    case Status::processing_error: return "processing_error";
  }
  return "unknown_status";
}

Bytes encode_request(const Request& request) {
  ByteWriter out;
  write_header(out, request.version, request.op_id, request.params);
  out.u64(request.payload.size());
  out.raw(request.payload);
  return std::move(out).take();
}

Request decode_request(std::span<const std::uint8_t> frame) {
  RawFrame raw = decode_frame(frame);
  return Request{raw.version, raw.code, std::move(raw.block), std::move(raw.payload)};
}

Bytes encode_response(const Response& response) {
  ByteWriter out;
  std::span<const std::uint8_t> message(
      reinterpret_cast<const std::uint8_t*>(response.message.data()), response.message.size());
  write_header(out, response.version, static_cast<std::uint16_t>(response.status), message);
  out.u64(response.payload.size());
  out.raw(response.payload);
  return std::move(out).take();
}

Response decode_response(std::span<const std::uint8_t> frame) {
  RawFrame raw = decode_frame(frame);
  if (raw.code > static_cast<std::uint16_t>(Status::processing_error)) {
    throw ProtocolError(Status::malformed_frame, "unknown status " + std::to_string(raw.code));
  }
  return Response{raw.version, static_cast<Status>(raw.code),
                  std::string(raw.block.begin(), raw.block.end()), std::move(raw.payload)};
}

OpId op_id_of(const OpParams& params) {
  return static_cast<OpId>(params.index() + 1);
}

Bytes encode_params(const PublicKey& pk, const OpParams& params) {
  ByteWriter out;
  Bytes key = pk.serialize();
  out.u32(static_cast<std::uint32_t>(key.size()));
  out.raw(key);
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, BrightnessParams>) {
          out.raw(p.value.key_fingerprint());
          out.u32(p.value.base);
          write_number(out, p.value);
        } else if constexpr (std::is_same_v<T, ConvolveParams>) {
          write_kernel(out, p.kernel);
        } else if constexpr (std::is_same_v<T, GradientParams>) {
          write_kernel(out, p.horizontal);
          write_kernel(out, p.vertical);
        } else if constexpr (std::is_same_v<T, SharpenParams>) {
          out.short_string(decimal(p.k));
          write_kernel(out, p.lpf);
        } else if constexpr (std::is_same_v<T, MorphParams>) {
          out.u16(static_cast<std::uint16_t>(p.element.rows()));
          out.u16(static_cast<std::uint16_t>(p.element.cols()));
          out.raw(p.element.mask());
        } else if constexpr (std::is_same_v<T, EqualizeParams>) {
          out.u32(p.levels);
          out.u32(p.width);
          out.u32(p.height);
        }
      },
      params);
  return std::move(out).take();
}

DecodedParams decode_params(std::uint16_t op_id, std::span<const std::uint8_t> bytes) {
  if (op_id < static_cast<std::uint16_t>(OpId::negate) ||
      op_id > static_cast<std::uint16_t>(OpId::equalize_transform)) {
    throw ProtocolError(Status::unknown_op, "operation id " + std::to_string(op_id));
  }
  try {
    ByteReader in(bytes);
    PublicKey key = PublicKey::deserialize(in.raw(in.u32()));
    OpParams params;
    switch (static_cast<OpId>(op_id)) {
      case OpId::negate:
        params = NegateParams{};
        break;
      case OpId::brightness: {
        Fingerprint fp = read_fingerprint(in);
        std::uint32_t base = in.u32();
        params = BrightnessParams{read_number(in, fp, base)};
        break;
      }
      case OpId::convolve:
        params = ConvolveParams{read_kernel(in)};
        break;
      case OpId::gradient: {
        Kernel h1 = read_kernel(in);
        Kernel h2 = read_kernel(in);
        params = GradientParams{std::move(h1), std::move(h2)};
        break;
      }
      case OpId::sharpen: {
        double k = parse_decimal(in.short_string());
        params = SharpenParams{k, read_kernel(in)};
        break;
      }
      case OpId::morph_sum: {
        const std::uint16_t rows = in.u16();
        const std::uint16_t cols = in.u16();
        auto cells = in.raw(static_cast<std::size_t>(rows) * cols);
        params = MorphParams{
            StructuringElement(rows, cols, std::vector<std::uint8_t>(cells.begin(), cells.end()))};
        break;
      }
      case OpId::equalize_transform: {
        EqualizeParams p;
        p.levels = in.u32();
        p.width = in.u32();
        p.height = in.u32();
        params = p;
        break;
      }
    }
    in.expect_done("params");
    return DecodedParams{std::move(key), std::move(params)};
  } catch (const ProtocolError&) {
    throw;
  } catch (const Error& e) {
    throw ProtocolError(Status::bad_params, e.what());
  }
}

Bytes encode_image_pair(const EncryptedImage& first, const EncryptedImage& second) {
  ByteWriter out;
  for (const auto* image : {&first, &second}) {
    Bytes blob = serialize(*image);
    out.u64(blob.size());
    out.raw(blob);
  }
  return std::move(out).take();
}

std::pair<EncryptedImage, EncryptedImage> decode_image_pair(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  EncryptedImage first = deserialize_image(in.raw(static_cast<std::size_t>(in.u64())));
  EncryptedImage second = deserialize_image(in.raw(static_cast<std::size_t>(in.u64())));
  in.expect_done("image pair");
  return {std::move(first), std::move(second)};
}

}  // namespace cryptopix
