#include "cryptopix/image.hpp"

#include <algorithm>
#include <cmath>

#include "cryptopix/errors.hpp"
#include "cryptopix/parallel.hpp"

namespace cryptopix {
namespace {

constexpr std::string_view kImageMagic = "CPXI";
constexpr std::string_view kNumbersMagic = "CPXN";
constexpr std::uint8_t kContainerVersion = 1;

// Every ciphertext is padded to the widest one so records have a fixed size.
std::size_t widest(const std::vector<EncryptedNumber>& values) {
  std::size_t width = 0;
  for (const auto& v : values) {
    width = std::max(width, byte_length(v.ciphertext.value));
  }
  return width;
}

void write_records(ByteWriter& out, const std::vector<EncryptedNumber>& values) {
  const std::size_t width = widest(values);
  out.u32(static_cast<std::uint32_t>(width));
  for (const auto& v : values) {
    out.i32(v.exponent);
    out.bigint_fixed(v.ciphertext.value, width);
  }
}

std::vector<EncryptedNumber> read_records(ByteReader& in, std::size_t count,
                                          const Fingerprint& key, std::uint32_t base) {
  const std::uint32_t width = in.u32();
  if (count != 0 && in.remaining() / count < width + 4u) {
    throw FormatError("encrypted container truncated");
  }
  std::vector<EncryptedNumber> values;
  values.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::int32_t exponent = in.i32();
    if (exponent > 0) {
      throw FormatError("encrypted number with positive exponent");
    }
    values.push_back(EncryptedNumber{RawCiphertext{in.bigint_fixed(width), key}, exponent, base});
  }
  return values;
}

Fingerprint read_fingerprint(ByteReader& in) {
  Fingerprint key{};
  auto raw = in.raw(key.size());
  std::copy(raw.begin(), raw.end(), key.begin());
  return key;
}

void check_version(ByteReader& in, std::string_view what) {
  if (auto version = in.u8(); version != kContainerVersion) {
    throw FormatError(std::string(what) + ": unsupported version " + std::to_string(version));
  }
}

}  // namespace

PlainImage PlainImage::filled(std::uint32_t width, std::uint32_t height, std::int32_t value,
                              std::uint32_t levels) {
  PlainImage out{width, height, levels, {}};
  out.pixels.assign(static_cast<std::size_t>(width) * height, value);
  return out;
}

void PlainImage::validate() const {
  if (width == 0 || height == 0) {
    throw ShapeError("image dimensions must be positive");
  }
  if (pixels.size() != static_cast<std::size_t>(width) * height) {
    throw ShapeError("pixel count does not match width * height");
  }
  if (levels < 2) {
    throw ParameterError("image must have at least two grey levels");
  }
  for (auto p : pixels) {
    if (p < 0 || static_cast<std::uint32_t>(p) >= levels) {
      throw RangeError("pixel value " + std::to_string(p) + " outside [0, " +
                       std::to_string(levels - 1) + "]");
    }
  }
}

double round_half_away(double value) { return std::round(value); }

PlainImage quantize(const RealImage& image, std::uint32_t levels, bool clamp) {
  PlainImage out{image.width, image.height, levels, {}};
  out.pixels.reserve(image.values.size());
  const double top = static_cast<double>(levels) - 1.0;
  for (double v : image.values) {
    double r = round_half_away(v);
    if (r < 0.0 || r > top) {
      if (!clamp) {
        throw RangeError("value " + std::to_string(v) + " outside [0, " +
                         std::to_string(levels - 1) + "]");
      }
      r = std::clamp(r, 0.0, top);
    }
    out.pixels.push_back(static_cast<std::int32_t>(r));
  }
  return out;
}

RealImage to_real(const PlainImage& image) {
  RealImage out{image.width, image.height, {}};
  out.values.assign(image.pixels.begin(), image.pixels.end());
  return out;
}

EncryptedImage encrypt_image(const PublicKey& pk, const PlainImage& image,
                             const Precision& precision, EntropySource& rng, unsigned threads) {
  image.validate();
  EncryptedImage out{image.width, image.height, image.levels, precision.base(), pk.fingerprint(),
                     {}};
  out.pixels.resize(image.size());
  const std::uint64_t nonce = rng.next_u64();
  parallel_for(image.size(), threads, [&](std::size_t i) {
    auto local = rng.substream(nonce, i);
    out.pixels[i] = en_encrypt(pk, encode(pk, image.pixels[i], precision), *local);
  });
  return out;
}

EncryptedNumbers encrypt_values(const PublicKey& pk, std::span<const double> values,
                                const Precision& precision, EntropySource& rng,
                                unsigned threads) {
  EncryptedNumbers out{precision.base(), pk.fingerprint(), {}};
  out.values.resize(values.size());
  const std::uint64_t nonce = rng.next_u64();
  parallel_for(values.size(), threads, [&](std::size_t i) {
    auto local = rng.substream(nonce, i);
    out.values[i] = en_encrypt(pk, encode(pk, values[i], precision), *local);
  });
  return out;
}

Bytes serialize(const EncryptedImage& image) {
  if (image.pixels.size() != static_cast<std::size_t>(image.width) * image.height) {
    throw ShapeError("encrypted image pixel count does not match its dimensions");
  }
  ByteWriter out;
  out.raw(kImageMagic);
  out.u8(kContainerVersion);
  out.u32(image.width);
  out.u32(image.height);
  out.u32(image.levels);
  out.u32(image.base);
  out.raw(image.key);
  write_records(out, image.pixels);
  return std::move(out).take();
}

EncryptedImage deserialize_image(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  in.expect_magic(kImageMagic, "encrypted image");
  check_version(in, "encrypted image");
  EncryptedImage out;
  out.width = in.u32();
  out.height = in.u32();
  out.levels = in.u32();
  out.base = in.u32();
  out.key = read_fingerprint(in);
  if (out.width == 0 || out.height == 0) {
    throw FormatError("encrypted image: empty dimensions");
  }
  out.pixels = read_records(in, static_cast<std::size_t>(out.width) * out.height, out.key,
                            out.base);
  in.expect_done("encrypted image");
  return out;
}

Bytes serialize(const EncryptedNumbers& numbers) {
  ByteWriter out;
  out.raw(kNumbersMagic);
  out.u8(kContainerVersion);
  out.u32(static_cast<std::uint32_t>(numbers.values.size()));
  out.u32(numbers.base);
  out.raw(numbers.key);
  write_records(out, numbers.values);
  return std::move(out).take();
}

EncryptedNumbers deserialize_numbers(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  in.expect_magic(kNumbersMagic, "encrypted array");
  check_version(in, "encrypted array");
  EncryptedNumbers out;
  const std::uint32_t count = in.u32();
  out.base = in.u32();
  out.key = read_fingerprint(in);
  out.values = read_records(in, count, out.key, out.base);
  in.expect_done("encrypted array");
  return out;
}

std::size_t serialized_size(const EncryptedImage& image) {
  constexpr std::size_t header = 4 + 1 + 4 * 4 + 16 + 4;
  return header + image.pixels.size() * (4 + widest(image.pixels));
}

double expansion_factor(const EncryptedImage& image) {
  const double plain_bits = 8.0 * image.width * image.height;
  return 8.0 * static_cast<double>(serialized_size(image)) / plain_bits;
}

}  // namespace cryptopix
