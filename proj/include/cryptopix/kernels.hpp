#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cryptopix {

/// Real-valued correlation mask anchored at its center, with a scale applied
/// once to the weighted sum (1 / (rows * cols) for a box average).
class Kernel {
 public:
  Kernel(std::uint32_t rows, std::uint32_t cols, std::vector<double> weights,
         double post_scale = 1.0);

  /// rows x cols averaging filter.
  static Kernel box(std::uint32_t rows, std::uint32_t cols);
  /// size x size mask with a single 1 at the center.
  static Kernel identity(std::uint32_t size = 3);

  std::uint32_t rows() const { return rows_; }
  std::uint32_t cols() const { return cols_; }
  double weight(std::uint32_t row, std::uint32_t col) const { return weights_[row * cols_ + col]; }
  const std::vector<double>& weights() const { return weights_; }
  double post_scale() const { return post_scale_; }

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  std::uint32_t rows_;
  std::uint32_t cols_;
  std::vector<double> weights_;
  double post_scale_;
};

enum class GradientOperator { sobel, prewitt, robinson, kirsch };

/// (horizontal h1, vertical h2) masks. h1 responds to intensity increasing to
/// the right, h2 to intensity increasing downwards.
std::pair<Kernel, Kernel> gradient_kernels(GradientOperator op);
std::optional<GradientOperator> parse_gradient_operator(std::string_view name);
std::string_view to_string(GradientOperator op);

/// Binary probe shape for morphology, anchored at its center.
class StructuringElement {
 public:
  StructuringElement(std::uint32_t rows, std::uint32_t cols, std::vector<std::uint8_t> mask);

  static StructuringElement square(std::uint32_t size = 3);
  static StructuringElement cross(std::uint32_t size = 3);

  std::uint32_t rows() const { return rows_; }
  std::uint32_t cols() const { return cols_; }
  bool at(std::uint32_t row, std::uint32_t col) const { return mask_[row * cols_ + col] != 0; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  std::uint32_t ones_count() const { return ones_; }
  /// Point reflection through the anchor.
  StructuringElement reflected() const;

  friend bool operator==(const StructuringElement&, const StructuringElement&) = default;

 private:
  std::uint32_t rows_;
  std::uint32_t cols_;
  std::vector<std::uint8_t> mask_;
  std::uint32_t ones_;
};

/// "boxN", "identity", "identityN", or rows of comma-separated weights joined
/// by ';' with an optional "/D" suffix meaning post_scale = 1/D,
/// e.g. "1,2,1;2,4,2;1,2,1/16".
Kernel parse_kernel(std::string_view spec);
std::string format_kernel(const Kernel& kernel);

/// "squareN", "NxN" (all ones), "crossN", or rows of 0/1 digits joined by ';'.
StructuringElement parse_structuring_element(std::string_view spec);

}  // namespace cryptopix
