#include "cryptopix/client_post.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cryptopix/errors.hpp"

namespace cryptopix {

std::vector<std::uint64_t> compute_histogram(const PlainImage& image, std::uint32_t levels) {
  std::vector<std::uint64_t> counts(levels, 0);
  for (auto p : image.pixels) {
    if (p < 0 || static_cast<std::uint32_t>(p) >= levels) {
      throw RangeError("pixel value " + std::to_string(p) + " outside the histogram range");
    }
    ++counts[static_cast<std::size_t>(p)];
  }
  return counts;
}

EncryptedNumbers encrypt_histogram(const PublicKey& pk, std::span<const std::uint64_t> histogram,
                                   const Precision& precision, EntropySource& rng,
                                   unsigned threads) {
  std::vector<double> values(histogram.begin(), histogram.end());
  return encrypt_values(pk, values, precision, rng, threads);
}

PlainImage GradientField::display() const {
  PlainImage out{width, height, 256, {}};
  out.pixels.reserve(magnitude.size());
  const double peak = magnitude.empty() ? 0.0 : *std::max_element(magnitude.begin(), magnitude.end());
  for (double m : magnitude) {
    out.pixels.push_back(peak > 0.0 ? static_cast<std::int32_t>(std::round(255.0 * m / peak)) : 0);
  }
  return out;
}

GradientField finish_gradient(const RealImage& gx, const RealImage& gy) {
  if (gx.width != gy.width || gx.height != gy.height || gx.size() != gy.size()) {
    throw ShapeError("gradient components have different shapes");
  }
  GradientField field{gx.width, gx.height, gx.values, gy.values, {}, {}};
  field.magnitude.reserve(gx.size());
  field.direction.reserve(gx.size());
  for (std::size_t i = 0; i < gx.size(); ++i) {
    const double x = gx.values[i];
    const double y = gy.values[i];
    field.magnitude.push_back(std::sqrt(x * x + y * y));
    double theta = (x == 0.0 && y == 0.0) ? 0.0 : std::atan2(y, x);
    // atan2 returns -pi for (-x, -0.0); fold it onto the closed end.
    if (theta == -std::numbers::pi) {
      theta = std::numbers::pi;
    }
    field.direction.push_back(theta);
  }
  return field;
}

PlainImage finish_morphology(const PlainImage& sums, const StructuringElement& element,
                             MorphMode mode) {
  const std::int32_t threshold =
      mode == MorphMode::erosion ? static_cast<std::int32_t>(element.ones_count()) : 1;
  PlainImage out{sums.width, sums.height, 2, {}};
  out.pixels.reserve(sums.size());
  for (auto s : sums.pixels) {
    out.pixels.push_back(s >= threshold ? 1 : 0);
  }
  return out;
}

PlainImage finish_equalization(const PlainImage& image, std::span<const double> lut) {
  if (lut.size() < 2) {
    throw ParameterError("equalization table needs at least two entries");
  }
  const auto levels = static_cast<std::uint32_t>(lut.size());
  PlainImage out{image.width, image.height, levels, {}};
  out.pixels.reserve(image.size());
  const double top = static_cast<double>(levels - 1);
  for (auto p : image.pixels) {
    if (p < 0 || static_cast<std::size_t>(p) >= lut.size()) {
      throw RangeError("pixel value outside the equalization table");
    }
    const double mapped = std::clamp(round_half_away(lut[static_cast<std::size_t>(p)]), 0.0, top);
    out.pixels.push_back(static_cast<std::int32_t>(mapped));
  }
  return out;
}

}  // namespace cryptopix
