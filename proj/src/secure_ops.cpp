#include "cryptopix/secure_ops.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <vector>

#include "cryptopix/encoding.hpp"
#include "cryptopix/errors.hpp"
#include "cryptopix/parallel.hpp"

namespace cryptopix {
namespace {

class RngHandle {
 public:
  explicit RngHandle(EntropySource* external) : external_(external) {
    if (external_ == nullptr) {
      owned_ = std::make_unique<SystemEntropy>();
    }
  }
  EntropySource& get() { return external_ != nullptr ? *external_ : *owned_; }

 private:
  EntropySource* external_;
  std::unique_ptr<EntropySource> owned_;
};

void check_image(const PublicKey& pk, const EncryptedImage& image) {
  if (image.key != pk.fingerprint()) {
    throw KeyMismatchError("image was encrypted under key " + to_hex(image.key) +
                           ", request key is " + to_hex(pk.fingerprint()));
  }
  if (image.width == 0 || image.height == 0 ||
      image.pixels.size() != static_cast<std::size_t>(image.width) * image.height) {
    throw ShapeError("encrypted image pixel count does not match its dimensions");
  }
  for (const auto& p : image.pixels) {
    if (p.key_fingerprint() != image.key || p.base != image.base) {
      throw KeyMismatchError("encrypted image mixes keys or encoding bases");
    }
  }
}

// Exponent at which plaintext scalars are encoded: the coarsest pixel exponent,
// which is the encryption precision for freshly encrypted images.
int scalar_exponent(const std::vector<EncryptedNumber>& values) {
  int exponent = values.front().exponent;
  for (const auto& v : values) {
    exponent = std::max(exponent, v.exponent);
  }
  return exponent;
}

// Plaintext scalars use the coarsest exponent that still represents them
// exactly, falling back to `floor`. Integer weights then cost a handful of
// multiplications instead of a full precision-sized exponentiation.
EncodedNumber encode_scalar(const PublicKey& pk, double value, int floor, std::uint32_t base) {
  const mpq_class exact(value);
  for (int e = 0; e > floor; --e) {
    EncodedNumber candidate = encode_at(pk, value, e, base);
    if (decode_exact(pk, candidate) == exact) {
      return candidate;
    }
  }
  return encode_at(pk, value, floor, base);
}

std::int64_t reflect101(std::int64_t i, std::int64_t n) {
  if (n == 1) {
    return 0;
  }
  while (i < 0 || i >= n) {
    if (i < 0) {
      i = -i;
    }
    if (i >= n) {
      i = 2 * (n - 1) - i;
    }
  }
  return i;
}

EncryptedImage like(const EncryptedImage& image) {
  EncryptedImage out{image.width, image.height, image.levels, image.base, image.key, {}};
  out.pixels.resize(image.pixels.size());
  return out;
}

struct Tap {
  std::int64_t dy;
  std::int64_t dx;
  EncodedNumber magnitude;
};

// Positive and negative taps are summed separately and combined with one
// subtraction, so each output pixel needs a single ciphertext inversion.
EncryptedImage convolve(const PublicKey& pk, const EncryptedImage& image, const Kernel& kernel,
                        const ExecOptions& options, EntropySource& rng) {
  if (kernel.rows() > image.height || kernel.cols() > image.width) {
    throw ShapeError("kernel is larger than the image");
  }
  const int exponent = scalar_exponent(image.pixels);
  const std::int64_t cy = kernel.rows() / 2;
  const std::int64_t cx = kernel.cols() / 2;

  std::vector<Tap> positive;
  std::vector<Tap> negative;
  for (std::uint32_t r = 0; r < kernel.rows(); ++r) {
    for (std::uint32_t c = 0; c < kernel.cols(); ++c) {
      const double w = kernel.weight(r, c);
      EncodedNumber magnitude = encode_scalar(pk, std::abs(w), exponent, image.base);
      if (magnitude.mantissa == 0) {
        continue;
      }
      Tap tap{static_cast<std::int64_t>(r) - cy, static_cast<std::int64_t>(c) - cx,
              std::move(magnitude)};
      (w < 0 ? negative : positive).push_back(std::move(tap));
    }
  }

  std::optional<EncodedNumber> post;
  if (kernel.post_scale() != 1.0) {
    post = encode_scalar(pk, kernel.post_scale(), exponent, image.base);
  }

  // Only needed when every weight rounds to zero at this precision.
  std::optional<EncryptedNumber> zero;
  if (positive.empty() && negative.empty()) {
    zero = en_encrypt(pk, EncodedNumber{0, exponent + scalar_exponent(image.pixels), image.base},
                      rng);
  }

  const auto height = static_cast<std::int64_t>(image.height);
  const auto width = static_cast<std::int64_t>(image.width);
  auto weighted_sum = [&](const std::vector<Tap>& taps, std::int64_t y,
                          std::int64_t x) -> std::optional<EncryptedNumber> {
    std::optional<EncryptedNumber> acc;
    for (const auto& tap : taps) {
      const auto sy = reflect101(y + tap.dy, height);
      const auto sx = reflect101(x + tap.dx, width);
      EncryptedNumber term = en_scalar_mul(
          pk, image.pixels[static_cast<std::size_t>(sy * width + sx)], tap.magnitude);
      acc = acc ? en_add(pk, *acc, term) : std::move(term);
    }
    return acc;
  };

  EncryptedImage out = like(image);
  parallel_for(out.pixels.size(), options.threads, [&](std::size_t i) {
    const auto y = static_cast<std::int64_t>(i) / width;
    const auto x = static_cast<std::int64_t>(i) % width;
    auto plus = weighted_sum(positive, y, x);
    auto minus = weighted_sum(negative, y, x);
    EncryptedNumber value = plus && minus ? en_sub(pk, *plus, *minus)
                            : plus        ? std::move(*plus)
                            : minus       ? en_negate(pk, *minus)
                                          : *zero;
    if (post) {
      value = en_scalar_mul(pk, value, *post);
    }
    out.pixels[i] = std::move(value);
  });
  return out;
}

}  // namespace

std::string_view to_string(OpId op) {
  switch (op) {
    case OpId::negate: return "negate";
    case OpId::brightness: return "brightness";
    case OpId::convolve: return "convolve";
    case OpId::gradient: return "gradient";
    case OpId::sharpen: return "sharpen";
    case OpId::morph_sum: return "morph_sum";
    case OpId::equalize_transform: return "equalize_transform";
  }
  return "unknown";
}

EncryptedImage op_negate(const PublicKey& pk, const EncryptedImage& image,
                         const ExecOptions& options) {
  check_image(pk, image);
  RngHandle rng(options.rng);
  const int exponent = scalar_exponent(image.pixels);
  const EncryptedNumber top = en_encrypt(
      pk, encode_integer(pk, mpz_class(image.levels - 1u), exponent, image.base), rng.get());

  EncryptedImage out = like(image);
  parallel_for(out.pixels.size(), options.threads,
               [&](std::size_t i) { out.pixels[i] = en_sub(pk, top, image.pixels[i]); });
  return out;
}

EncryptedImage op_brightness(const PublicKey& pk, const EncryptedImage& image,
                             const EncryptedNumber& value, const ExecOptions& options) {
  check_image(pk, image);
  if (value.key_fingerprint() != pk.fingerprint()) {
    throw KeyMismatchError("brightness offset was encrypted under another key");
  }
  if (value.base != image.base) {
    throw ParameterError("brightness offset uses a different encoding base");
  }
  EncryptedImage out = like(image);
  parallel_for(out.pixels.size(), options.threads,
               [&](std::size_t i) { out.pixels[i] = en_add(pk, image.pixels[i], value); });
  return out;
}

EncryptedImage op_convolve(const PublicKey& pk, const EncryptedImage& image, const Kernel& kernel,
                           const ExecOptions& options) {
  check_image(pk, image);
  RngHandle rng(options.rng);
  return convolve(pk, image, kernel, options, rng.get());
}

std::pair<EncryptedImage, EncryptedImage> op_gradient(const PublicKey& pk,
                                                      const EncryptedImage& image,
                                                      const Kernel& h1, const Kernel& h2,
                                                      const ExecOptions& options) {
  check_image(pk, image);
  RngHandle rng(options.rng);
  EncryptedImage gx = convolve(pk, image, h1, options, rng.get());
  EncryptedImage gy = convolve(pk, image, h2, options, rng.get());
  return {std::move(gx), std::move(gy)};
}

EncryptedImage op_sharpen(const PublicKey& pk, const EncryptedImage& image, double k,
                          const Kernel& lpf, const ExecOptions& options) {
  check_image(pk, image);
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw ParameterError("sharpening strength k must be positive");
  }
  RngHandle rng(options.rng);
  const EncryptedImage smooth = convolve(pk, image, lpf, options, rng.get());
  const int exponent = scalar_exponent(image.pixels);
  const EncodedNumber boost = encode_scalar(pk, k + 1.0, exponent, image.base);
  const EncodedNumber strength = encode_scalar(pk, k, exponent, image.base);

  EncryptedImage out = like(image);
  parallel_for(out.pixels.size(), options.threads, [&](std::size_t i) {
    out.pixels[i] = en_sub(pk, en_scalar_mul(pk, image.pixels[i], boost),
                           en_scalar_mul(pk, smooth.pixels[i], strength));
  });
  return out;
}

EncryptedImage op_morph_sum(const PublicKey& pk, const EncryptedImage& image,
                            const StructuringElement& element, const ExecOptions& options) {
  check_image(pk, image);
  if (image.levels != 2) {
    throw ParameterError("morphology requires a binary image (levels = 2), got levels = " +
                         std::to_string(image.levels));
  }
  RngHandle rng(options.rng);
  const int exponent = scalar_exponent(image.pixels);
  const EncryptedNumber zero =
      en_encrypt(pk, EncodedNumber{0, exponent, image.base}, rng.get());

  const auto height = static_cast<std::int64_t>(image.height);
  const auto width = static_cast<std::int64_t>(image.width);
  const std::int64_t cy = element.rows() / 2;
  const std::int64_t cx = element.cols() / 2;

  EncryptedImage out = like(image);
  out.levels = element.ones_count() + 1;
  parallel_for(out.pixels.size(), options.threads, [&](std::size_t i) {
    const auto y = static_cast<std::int64_t>(i) / width;
    const auto x = static_cast<std::int64_t>(i) % width;
    std::optional<EncryptedNumber> acc;
    for (std::uint32_t r = 0; r < element.rows(); ++r) {
      for (std::uint32_t c = 0; c < element.cols(); ++c) {
        if (!element.at(r, c)) {
          continue;
        }
        const auto sy = y + static_cast<std::int64_t>(r) - cy;
        const auto sx = x + static_cast<std::int64_t>(c) - cx;
        if (sy < 0 || sy >= height || sx < 0 || sx >= width) {
          continue;
        }
        const auto& pixel = image.pixels[static_cast<std::size_t>(sy * width + sx)];
        acc = acc ? en_add(pk, *acc, pixel) : pixel;
      }
    }
    out.pixels[i] = acc ? std::move(*acc) : zero;
  });
  return out;
}

EncryptedNumbers op_equalize_transform(const PublicKey& pk, const EncryptedNumbers& histogram,
                                       std::uint32_t levels, std::uint32_t width,
                                       std::uint32_t height, const ExecOptions& options) {
  if (histogram.key != pk.fingerprint()) {
    throw KeyMismatchError("histogram was encrypted under another key");
  }
  if (levels < 2) {
    throw ParameterError("histogram needs at least two levels");
  }
  if (histogram.values.size() != levels) {
    throw ShapeError("histogram has " + std::to_string(histogram.values.size()) +
                     " entries, expected " + std::to_string(levels));
  }
  if (width == 0 || height == 0) {
    throw ParameterError("image dimensions must be positive");
  }

  std::vector<EncryptedNumber> cumulative;
  cumulative.reserve(levels);
  cumulative.push_back(histogram.values.front());
  for (std::size_t p = 1; p < levels; ++p) {
    cumulative.push_back(en_add(pk, cumulative.back(), histogram.values[p]));
  }

  const double factor =
      static_cast<double>(levels - 1) / (static_cast<double>(width) * static_cast<double>(height));
  const EncodedNumber scale =
      encode_scalar(pk, factor, scalar_exponent(histogram.values), histogram.base);

  EncryptedNumbers out{histogram.base, histogram.key, {}};
  out.values.resize(levels);
  parallel_for(levels, options.threads,
               [&](std::size_t p) { out.values[p] = en_scalar_mul(pk, cumulative[p], scale); });
  return out;
}

}  // namespace cryptopix
