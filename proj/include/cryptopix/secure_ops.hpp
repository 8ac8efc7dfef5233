#pragma once

#include <cstdint>
#include <string_view>
#include <utility>

#include "cryptopix/entropy.hpp"
#include "cryptopix/image.hpp"
#include "cryptopix/kernels.hpp"
#include "cryptopix/paillier.hpp"

// Encrypted-domain image operations. Everything here works from the public key
// and ciphertexts alone; no declaration in this header accepts key secrets.

namespace cryptopix {

/// Wire-stable operation identifiers.
enum class OpId : std::uint16_t {
  negate = 1,
  brightness = 2,
  convolve = 3,
  gradient = 4,
  sharpen = 5,
  morph_sum = 6,
  equalize_transform = 7,
};

std::string_view to_string(OpId op);

struct ExecOptions {
  /// Worker threads for per-pixel loops; 0 uses every core.
  unsigned threads = 0;
  /// Randomness for constants the server encrypts itself; OS randomness when null.
  EntropySource* rng = nullptr;
};

/// (L - 1) - i per pixel. The constant L - 1 is encrypted once per call.
EncryptedImage op_negate(const PublicKey& pk, const EncryptedImage& image,
                         const ExecOptions& options = {});

/// i + v per pixel; saturation is left to the client.
EncryptedImage op_brightness(const PublicKey& pk, const EncryptedImage& image,
                             const EncryptedNumber& value, const ExecOptions& options = {});

/// Correlation with `kernel` centered on each pixel, reflect-101 borders.
/// Weights and the post scale are encoded at the image's exponent; the post
/// scale is one final scalar multiplication per pixel (skipped when it is 1).
EncryptedImage op_convolve(const PublicKey& pk, const EncryptedImage& image, const Kernel& kernel,
                           const ExecOptions& options = {});

/// (G_x, G_y) = (image * h1, image * h2), unscaled and signed.
std::pair<EncryptedImage, EncryptedImage> op_gradient(const PublicKey& pk,
                                                      const EncryptedImage& image,
                                                      const Kernel& h1, const Kernel& h2,
                                                      const ExecOptions& options = {});

/// High-boost filtering ((k + 1) * I) - (k * I_lpf); k = 1 is unsharp masking.
EncryptedImage op_sharpen(const PublicKey& pk, const EncryptedImage& image, double k,
                          const Kernel& lpf, const ExecOptions& options = {});

/// Sum of pixels under the set cells of `element`, zero padding outside the
/// image. The result is not thresholded. Requires a binary image (levels = 2);
/// the output declares levels = ones_count + 1.
EncryptedImage op_morph_sum(const PublicKey& pk, const EncryptedImage& image,
                            const StructuringElement& element, const ExecOptions& options = {});

/// Running sum of the encrypted histogram scaled by (levels - 1) / (width * height).
/// `histogram` must hold exactly `levels` entries.
EncryptedNumbers op_equalize_transform(const PublicKey& pk, const EncryptedNumbers& histogram,
                                       std::uint32_t levels, std::uint32_t width,
                                       std::uint32_t height, const ExecOptions& options = {});

}  // namespace cryptopix
