#include "cryptopix/kernels.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>

#include "cryptopix/errors.hpp"

namespace cryptopix {
namespace {

void check_odd(std::uint32_t rows, std::uint32_t cols, std::string_view what) {
  if (rows == 0 || cols == 0 || rows % 2 == 0 || cols % 2 == 0) {
    throw ShapeError(std::string(what) + " dimensions must be odd and positive");
  }
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) {
      return parts;
    }
    start = pos + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_double(std::string_view text) {
  text = trim(text);
  double value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value)) {
    throw ParameterError("invalid number '" + std::string(text) + "'");
  }
  return value;
}

std::optional<std::uint32_t> size_suffix(std::string_view spec, std::string_view prefix) {
  if (spec.substr(0, prefix.size()) != prefix) {
    return std::nullopt;
  }
  std::string_view digits = spec.substr(prefix.size());
  if (digits.empty()) {
    return 3u;
  }
  std::uint32_t value = 0;
  auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || end != digits.data() + digits.size()) {
    return std::nullopt;
  }
  return value;
}

Kernel mask(std::initializer_list<double> weights) {
  return Kernel(3, 3, std::vector<double>(weights));
}

}  // namespace

Kernel::Kernel(std::uint32_t rows, std::uint32_t cols, std::vector<double> weights,
               double post_scale)
    : rows_(rows), cols_(cols), weights_(std::move(weights)), post_scale_(post_scale) {
  check_odd(rows_, cols_, "kernel");
  if (weights_.size() != static_cast<std::size_t>(rows_) * cols_) {
    throw ShapeError("kernel weight count does not match its dimensions");
  }
  for (double w : weights_) {
    if (!std::isfinite(w)) {
      throw ParameterError("kernel weights must be finite");
    }
  }
  if (!std::isfinite(post_scale_)) {
    throw ParameterError("kernel post scale must be finite");
  }
}

Kernel Kernel::box(std::uint32_t rows, std::uint32_t cols) {
  return Kernel(rows, cols, std::vector<double>(static_cast<std::size_t>(rows) * cols, 1.0),
                1.0 / (static_cast<double>(rows) * cols));
}

Kernel Kernel::identity(std::uint32_t size) {
  std::vector<double> weights(static_cast<std::size_t>(size) * size, 0.0);
  weights[weights.size() / 2] = 1.0;
  return Kernel(size, size, std::move(weights));
}

std::pair<Kernel, Kernel> gradient_kernels(GradientOperator op) {
  switch (op) {
    case GradientOperator::sobel:
      return {mask({-1, 0, 1, -2, 0, 2, -1, 0, 1}), mask({-1, -2, -1, 0, 0, 0, 1, 2, 1})};
    case GradientOperator::prewitt:
      return {mask({-1, 0, 1, -1, 0, 1, -1, 0, 1}), mask({-1, -1, -1, 0, 0, 0, 1, 1, 1})};
    case GradientOperator::robinson:
      // East and south compass masks.
      return {mask({-1, 1, 1, -1, -2, 1, -1, 1, 1}), mask({-1, -1, -1, 1, -2, 1, 1, 1, 1})};
    case GradientOperator::kirsch:
      return {mask({-3, -3, 5, -3, 0, 5, -3, -3, 5}), mask({-3, -3, -3, -3, 0, -3, 5, 5, 5})};
  }
  throw ParameterError("unknown gradient operator");
}

std::optional<GradientOperator> parse_gradient_operator(std::string_view name) {
  if (name == "sobel") return GradientOperator::sobel;
  if (name == "prewitt") return GradientOperator::prewitt;
  if (name == "robinson") return GradientOperator::robinson;
  if (name == "kirsch") return GradientOperator::kirsch;
  return std::nullopt;
}

std::string_view to_string(GradientOperator op) {
  switch (op) {
    case GradientOperator::sobel: return "sobel";
    case GradientOperator::prewitt: return "prewitt";
    case GradientOperator::robinson: return "robinson";
    case GradientOperator::kirsch: return "kirsch";
  }
  return "unknown";
}

StructuringElement::StructuringElement(std::uint32_t rows, std::uint32_t cols,
                                       std::vector<std::uint8_t> mask)
    : rows_(rows), cols_(cols), mask_(std::move(mask)), ones_(0) {
  check_odd(rows_, cols_, "structuring element");
  if (mask_.size() != static_cast<std::size_t>(rows_) * cols_) {
    throw ShapeError("structuring element mask size does not match its dimensions");
  }
  for (auto& cell : mask_) {
    if (cell > 1) {
      throw ParameterError("structuring element cells must be 0 or 1");
    }
    ones_ += cell;
  }
  if (ones_ == 0) {
    throw ParameterError("structuring element needs at least one set cell");
  }
}

StructuringElement StructuringElement::square(std::uint32_t size) {
  return StructuringElement(size, size,
                            std::vector<std::uint8_t>(static_cast<std::size_t>(size) * size, 1));
}

StructuringElement StructuringElement::cross(std::uint32_t size) {
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(size) * size, 0);
  for (std::uint32_t i = 0; i < size; ++i) {
    cells[(size / 2) * size + i] = 1;
    cells[i * size + size / 2] = 1;
  }
  return StructuringElement(size, size, std::move(cells));
}

StructuringElement StructuringElement::reflected() const {
  std::vector<std::uint8_t> cells(mask_.rbegin(), mask_.rend());
  return StructuringElement(rows_, cols_, std::move(cells));
}

Kernel parse_kernel(std::string_view spec) {
  spec = trim(spec);
  if (auto n = size_suffix(spec, "box")) {
    return Kernel::box(*n, *n);
  }
  if (auto n = size_suffix(spec, "identity")) {
    return Kernel::identity(*n);
  }
  double post_scale = 1.0;
  if (auto slash = spec.rfind('/'); slash != std::string_view::npos) {
    double divisor = parse_double(spec.substr(slash + 1));
    if (divisor == 0.0) {
      throw ParameterError("kernel divisor must be non-zero");
    }
    post_scale = 1.0 / divisor;
    spec = spec.substr(0, slash);
  }
  std::vector<double> weights;
  std::uint32_t rows = 0;
  std::size_t cols = 0;
  for (auto row : split(spec, ';')) {
    auto cells = split(row, ',');
    if (rows == 0) {
      cols = cells.size();
    } else if (cells.size() != cols) {
      throw ShapeError("kernel rows have different lengths");
    }
    for (auto cell : cells) {
      weights.push_back(parse_double(cell));
    }
    ++rows;
  }
  return Kernel(rows, static_cast<std::uint32_t>(cols), std::move(weights), post_scale);
}

std::string format_kernel(const Kernel& kernel) {
  std::string out;
  char buf[64];
  for (std::uint32_t r = 0; r < kernel.rows(); ++r) {
    if (r != 0) out += ';';
    for (std::uint32_t c = 0; c < kernel.cols(); ++c) {
      if (c != 0) out += ',';
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, kernel.weight(r, c));
      out.append(buf, end);
    }
  }
  if (kernel.post_scale() != 1.0) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, 1.0 / kernel.post_scale());
    out += '/';
    out.append(buf, end);
  }
  return out;
}

StructuringElement parse_structuring_element(std::string_view spec) {
  spec = trim(spec);
  if (auto n = size_suffix(spec, "square")) {
    return StructuringElement::square(*n);
  }
  if (auto n = size_suffix(spec, "cross")) {
    return StructuringElement::cross(*n);
  }
  if (auto x = spec.find('x'); x != std::string_view::npos && x != 0 && x + 1 < spec.size()) {
    auto rows = size_suffix(spec.substr(0, x), "");
    auto cols = size_suffix(spec.substr(x + 1), "");
    if (rows && cols) {
      return StructuringElement(
          *rows, *cols, std::vector<std::uint8_t>(static_cast<std::size_t>(*rows) * *cols, 1));
    }
  }
  std::vector<std::uint8_t> cells;
  std::uint32_t rows = 0;
  std::size_t cols = 0;
  for (auto row : split(spec, ';')) {
    row = trim(row);
    if (rows == 0) {
      cols = row.size();
    } else if (row.size() != cols) {
      throw ShapeError("structuring element rows have different lengths");
    }
    for (char c : row) {
      if (c != '0' && c != '1') {
        throw ParameterError("structuring element cells must be '0' or '1'");
      }
      cells.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    ++rows;
  }
  return StructuringElement(rows, static_cast<std::uint32_t>(cols), std::move(cells));
}

}  // namespace cryptopix
