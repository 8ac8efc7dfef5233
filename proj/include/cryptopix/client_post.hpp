#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cryptopix/entropy.hpp"
#include "cryptopix/image.hpp"
#include "cryptopix/kernels.hpp"
#include "cryptopix/paillier.hpp"

namespace cryptopix {

/// Counts of each grey level in [0, levels).
std::vector<std::uint64_t> compute_histogram(const PlainImage& image, std::uint32_t levels);

/// Histogram counts encrypted at `precision`, ready for op_equalize_transform.
EncryptedNumbers encrypt_histogram(const PublicKey& pk, std::span<const std::uint64_t> histogram,
                                   const Precision& precision, EntropySource& rng,
                                   unsigned threads = 0);

struct GradientField {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<double> gx;
  std::vector<double> gy;
  std::vector<double> magnitude;
  std::vector<double> direction;  // radians in (-pi, pi], 0 where gx = gy = 0

  /// Magnitude rescaled linearly so its maximum maps to 255.
  PlainImage display() const;
};

GradientField finish_gradient(const RealImage& gx, const RealImage& gy);

enum class MorphMode { erosion, dilation };

/// Thresholds neighborhood sums: erosion keeps sums reaching ones_count,
/// dilation keeps sums of at least one. Output is a binary image.
PlainImage finish_morphology(const PlainImage& sums, const StructuringElement& element,
                             MorphMode mode);

/// Applies the transform: round half away from zero, clamp to [0, lut.size() - 1].
PlainImage finish_equalization(const PlainImage& image, std::span<const double> lut);

}  // namespace cryptopix
