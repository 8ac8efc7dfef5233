#include "cryptopix/plain_reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cryptopix/errors.hpp"

namespace cryptopix {
namespace {

std::int64_t reflect101(std::int64_t i, std::int64_t n) {
  if (n == 1) {
    return 0;
  }
  while (i < 0 || i >= n) {
    i = i < 0 ? -i : 2 * (n - 1) - i;
  }
  return i;
}

ErrorReport summarize(const std::vector<double>& errors) {
  ErrorReport report;
  report.pixel_count = errors.size();
  if (errors.empty()) {
    return report;
  }
  double sum = 0.0;
  for (double e : errors) {
    sum += e;
    report.max_abs_error = std::max(report.max_abs_error, e);
  }
  report.mean_abs_error = sum / static_cast<double>(errors.size());
  double sq = 0.0;
  for (double e : errors) {
    sq += (e - report.mean_abs_error) * (e - report.mean_abs_error);
  }
  report.std_dev = std::sqrt(sq / static_cast<double>(errors.size()));
  return report;
}

}  // namespace

PlainImage ref_negate(const PlainImage& image) {
  image.validate();
  PlainImage out = image;
  for (auto& p : out.pixels) {
    p = static_cast<std::int32_t>(image.levels) - 1 - p;
  }
  return out;
}

PlainImage ref_brightness(const PlainImage& image, double value) {
  image.validate();
  RealImage shifted = to_real(image);
  for (auto& v : shifted.values) {
    v += value;
  }
  return quantize(shifted, image.levels, true);
}

RealImage ref_convolve(const PlainImage& image, const Kernel& kernel) {
  image.validate();
  if (kernel.rows() > image.height || kernel.cols() > image.width) {
    throw ShapeError("kernel is larger than the image");
  }
  const auto height = static_cast<std::int64_t>(image.height);
  const auto width = static_cast<std::int64_t>(image.width);
  const std::int64_t cy = kernel.rows() / 2;
  const std::int64_t cx = kernel.cols() / 2;
  RealImage out{image.width, image.height, {}};
  out.values.reserve(image.size());
  for (std::int64_t y = 0; y < height; ++y) {
    for (std::int64_t x = 0; x < width; ++x) {
      double sum = 0.0;
      for (std::uint32_t r = 0; r < kernel.rows(); ++r) {
        for (std::uint32_t c = 0; c < kernel.cols(); ++c) {
          const auto sy = reflect101(y + r - cy, height);
          const auto sx = reflect101(x + c - cx, width);
          sum += kernel.weight(r, c) * image.pixels[static_cast<std::size_t>(sy * width + sx)];
        }
      }
      out.values.push_back(sum * kernel.post_scale());
    }
  }
  return out;
}

std::pair<RealImage, RealImage> ref_gradient(const PlainImage& image, const Kernel& h1,
                                             const Kernel& h2) {
  return {ref_convolve(image, h1), ref_convolve(image, h2)};
}

RealImage ref_sharpen(const PlainImage& image, double k, const Kernel& lpf) {
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw ParameterError("sharpening strength k must be positive");
  }
  RealImage out = ref_convolve(image, lpf);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    out.values[i] = (k + 1.0) * image.pixels[i] - k * out.values[i];
  }
  return out;
}

PlainImage ref_morph_sum(const PlainImage& image, const StructuringElement& element) {
  image.validate();
  if (image.levels != 2) {
    throw ParameterError("morphology requires a binary image (levels = 2)");
  }
  const auto height = static_cast<std::int64_t>(image.height);
  const auto width = static_cast<std::int64_t>(image.width);
  const std::int64_t cy = element.rows() / 2;
  const std::int64_t cx = element.cols() / 2;
  PlainImage out{image.width, image.height, element.ones_count() + 1, {}};
  out.pixels.reserve(image.size());
  for (std::int64_t y = 0; y < height; ++y) {
    for (std::int64_t x = 0; x < width; ++x) {
      std::int32_t sum = 0;
      for (std::uint32_t r = 0; r < element.rows(); ++r) {
        for (std::uint32_t c = 0; c < element.cols(); ++c) {
          const auto sy = y + r - cy;
          const auto sx = x + c - cx;
          if (element.at(r, c) && sy >= 0 && sy < height && sx >= 0 && sx < width) {
            sum += image.pixels[static_cast<std::size_t>(sy * width + sx)];
          }
        }
      }
      out.pixels.push_back(sum);
    }
  }
  return out;
}

PlainImage ref_morph(const PlainImage& image, const StructuringElement& element, MorphMode mode) {
  return finish_morphology(ref_morph_sum(image, element), element, mode);
}

std::vector<double> ref_equalize_lut(const PlainImage& image) {
  image.validate();
  const auto histogram = compute_histogram(image, image.levels);
  const double factor = static_cast<double>(image.levels - 1) /
                        (static_cast<double>(image.width) * static_cast<double>(image.height));
  std::vector<double> lut;
  lut.reserve(histogram.size());
  std::uint64_t cumulative = 0;
  for (auto count : histogram) {
    cumulative += count;
    lut.push_back(factor * static_cast<double>(cumulative));
  }
  return lut;
}

PlainImage ref_equalize(const PlainImage& image) {
  return finish_equalization(image, ref_equalize_lut(image));
}

ErrorReport compare(const PlainImage& ed, const PlainImage& pd) {
  if (ed.width != pd.width || ed.height != pd.height || ed.size() != pd.size()) {
    throw ShapeError("compared images have different shapes");
  }
  std::vector<double> errors;
  errors.reserve(ed.size());
  for (std::size_t i = 0; i < ed.size(); ++i) {
    errors.push_back(std::abs(static_cast<double>(ed.pixels[i]) - pd.pixels[i]));
  }
  return summarize(errors);
}

ErrorReport compare(const RealImage& ed, const RealImage& pd) {
  if (ed.width != pd.width || ed.height != pd.height || ed.size() != pd.size()) {
    throw ShapeError("compared images have different shapes");
  }
  std::vector<double> errors;
  errors.reserve(ed.size());
  for (std::size_t i = 0; i < ed.size(); ++i) {
    errors.push_back(std::abs(ed.values[i] - pd.values[i]));
  }
  return summarize(errors);
}

std::string error_csv_header() { return "op,precision,mean,std,max"; }

std::string to_csv(std::string_view op, double precision, const ErrorReport& report) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.*s,%g,%.10g,%.10g,%.10g", static_cast<int>(op.size()), op.data(),
                precision, report.mean_abs_error, report.std_dev, report.max_abs_error);
  return buf;
}

}  // namespace cryptopix
