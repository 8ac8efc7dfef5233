#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cryptopix/client_post.hpp"
#include "cryptopix/image.hpp"
#include "cryptopix/kernels.hpp"

// Plaintext implementations of every encrypted-domain operation with the same
// border and rounding conventions, used as the oracle for ED/PD comparisons.

namespace cryptopix {

PlainImage ref_negate(const PlainImage& image);
/// Saturating shift, rounded half away from zero.
PlainImage ref_brightness(const PlainImage& image, double value);
/// Correlation with reflect-101 borders: post_scale * sum(w * I).
RealImage ref_convolve(const PlainImage& image, const Kernel& kernel);
std::pair<RealImage, RealImage> ref_gradient(const PlainImage& image, const Kernel& h1,
                                             const Kernel& h2);
/// (k + 1) * I - k * (I convolved with lpf).
RealImage ref_sharpen(const PlainImage& image, double k, const Kernel& lpf);
/// Neighborhood sums under the set cells of the element, zero padding.
PlainImage ref_morph_sum(const PlainImage& image, const StructuringElement& element);
PlainImage ref_morph(const PlainImage& image, const StructuringElement& element, MorphMode mode);
/// T(p) = (G - 1) / (w * l) * H_c(p) with G = image.levels.
std::vector<double> ref_equalize_lut(const PlainImage& image);
PlainImage ref_equalize(const PlainImage& image);

/// Per-pixel |ED - PD| statistics; std_dev is the population deviation of the
/// absolute errors.
struct ErrorReport {
  double mean_abs_error = 0.0;
  double std_dev = 0.0;
  double max_abs_error = 0.0;
  std::size_t pixel_count = 0;
};

ErrorReport compare(const PlainImage& ed, const PlainImage& pd);
ErrorReport compare(const RealImage& ed, const RealImage& pd);

/// "op,precision,mean,std,max"
std::string error_csv_header();
std::string to_csv(std::string_view op, double precision, const ErrorReport& report);

}  // namespace cryptopix
