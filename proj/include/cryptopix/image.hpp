#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cryptopix/bytes.hpp"
#include "cryptopix/encoding.hpp"
#include "cryptopix/entropy.hpp"
#include "cryptopix/paillier.hpp"

namespace cryptopix {

/// Row-major integer raster with grey levels in [0, levels - 1], origin top-left.
/// Binary images use levels = 2 and values {0, 1}.
struct PlainImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t levels = 256;
  std::vector<std::int32_t> pixels;

  static PlainImage filled(std::uint32_t width, std::uint32_t height, std::int32_t value,
                           std::uint32_t levels = 256);

  std::size_t size() const { return pixels.size(); }
  std::int32_t at(std::uint32_t x, std::uint32_t y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::int32_t& at(std::uint32_t x, std::uint32_t y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  /// Throws ShapeError / RangeError when the invariants do not hold.
  void validate() const;

  friend bool operator==(const PlainImage&, const PlainImage&) = default;
};

/// Row-major real raster: signed gradients, unclamped filter output.
struct RealImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double at(std::uint32_t x, std::uint32_t y) const {
    return values[static_cast<std::size_t>(y) * width + x];
  }

  friend bool operator==(const RealImage&, const RealImage&) = default;
};

/// Round-half-away-from-zero.
double round_half_away(double value);

/// Rounds every value to the nearest integer. With clamp, saturates into
/// [0, levels - 1]; without it, out-of-range values raise RangeError.
PlainImage quantize(const RealImage& image, std::uint32_t levels, bool clamp);

RealImage to_real(const PlainImage& image);

/// Raster of encrypted pixels sharing one key and one encoding base.
struct EncryptedImage {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::uint32_t levels = 256;
  std::uint32_t base = kDefaultBase;
  Fingerprint key{};
  std::vector<EncryptedNumber> pixels;

  const EncryptedNumber& at(std::uint32_t x, std::uint32_t y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
};

/// Flat array of encrypted numbers under one key: histograms and lookup tables.
struct EncryptedNumbers {
  std::uint32_t base = kDefaultBase;
  Fingerprint key{};
  std::vector<EncryptedNumber> values;
};

/// Encodes and encrypts every pixel independently. Each pixel draws its blinding
/// factor from its own substream of `rng`, so seeded runs are reproducible for
/// any thread count. threads = 0 uses every core.
EncryptedImage encrypt_image(const PublicKey& pk, const PlainImage& image,
                             const Precision& precision, EntropySource& rng,
                             unsigned threads = 0);

EncryptedNumbers encrypt_values(const PublicKey& pk, std::span<const double> values,
                                const Precision& precision, EntropySource& rng,
                                unsigned threads = 0);

/// `CPXI` | version u8 | width u32 | height u32 | levels u32 | base u32 |
/// fingerprint[16] | ciphertext width u32 | per pixel: exponent i32 | ciphertext.
Bytes serialize(const EncryptedImage& image);
EncryptedImage deserialize_image(std::span<const std::uint8_t> bytes);

/// `CPXN` | version u8 | count u32 | base u32 | fingerprint[16] |
/// ciphertext width u32 | per value: exponent i32 | ciphertext.
Bytes serialize(const EncryptedNumbers& numbers);
EncryptedNumbers deserialize_numbers(std::span<const std::uint8_t> bytes);

/// Serialized size in bytes, without materializing the buffer.
std::size_t serialized_size(const EncryptedImage& image);

/// Serialized bits divided by the bits of an 8-bit plaintext of the same shape.
double expansion_factor(const EncryptedImage& image);

}  // namespace cryptopix
