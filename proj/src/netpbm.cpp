#include "cryptopix/netpbm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "cryptopix/errors.hpp"

namespace cryptopix {
namespace {

class HeaderScanner {
 public:
  explicit HeaderScanner(std::span<const std::uint8_t> data) : data_(data) {}

  unsigned long number() {
    skip_space_and_comments();
    if (pos_ >= data_.size() || !std::isdigit(data_[pos_])) {
      throw FormatError("netpbm: expected a decimal header field");
    }
    unsigned long value = 0;
    while (pos_ < data_.size() && std::isdigit(data_[pos_])) {
      value = value * 10 + (data_[pos_] - '0');
      if (value > 0xFFFFFFFFul) {
        throw FormatError("netpbm: header field too large");
      }
      ++pos_;
    }
    return value;
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::span<const std::uint8_t> raster() {
    if (pos_ >= data_.size() || !std::isspace(data_[pos_])) {
      throw FormatError("netpbm: missing whitespace before raster");
    }
    return data_.subspan(pos_ + 1);
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < data_.size()) {
      if (data_[pos_] == '#') {
        while (pos_ < data_.size() && data_[pos_] != '\n') {
          ++pos_;
        }
      } else if (std::isspace(data_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 2;
};

}  // namespace

PlainImage parse_netpbm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '4')) {
    throw FormatError("netpbm: only binary PGM (P5) and PBM (P4) are supported");
  }
  const bool bitmap = bytes[1] == '4';
  HeaderScanner header(bytes);
  const auto width = header.number();
  const auto height = header.number();
  if (width == 0 || height == 0) {
    throw FormatError("netpbm: empty image");
  }
  PlainImage image{static_cast<std::uint32_t>(width), static_cast<std::uint32_t>(height), 2, {}};
  image.pixels.reserve(width * height);

  if (bitmap) {
    auto raster = header.raster();
    const std::size_t stride = (width + 7) / 8;
    if (raster.size() < stride * height) {
      throw FormatError("netpbm: truncated PBM raster");
    }
    for (std::size_t y = 0; y < height; ++y) {
      for (std::size_t x = 0; x < width; ++x) {
        const std::uint8_t byte = raster[y * stride + x / 8];
        image.pixels.push_back((byte >> (7 - x % 8)) & 1);
      }
    }
    return image;
  }

  const auto maxval = header.number();
  if (maxval == 0 || maxval > 255) {
    throw FormatError("netpbm: PGM maxval must be in [1, 255]");
  }
  image.levels = static_cast<std::uint32_t>(maxval + 1);
  auto raster = header.raster();
  if (raster.size() < width * height) {
    throw FormatError("netpbm: truncated PGM raster");
  }
  for (std::size_t i = 0; i < width * height; ++i) {
    if (raster[i] > maxval) {
      throw FormatError("netpbm: sample exceeds maxval");
    }
    image.pixels.push_back(raster[i]);
  }
  return image;
}

Bytes format_netpbm(const PlainImage& image) {
  image.validate();
  std::string header;
  Bytes out;
  if (image.levels == 2) {
    header = "P4\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n";
    out.assign(header.begin(), header.end());
    const std::size_t stride = (image.width + 7) / 8;
    Bytes row(stride);
    for (std::uint32_t y = 0; y < image.height; ++y) {
      std::fill(row.begin(), row.end(), 0);
      for (std::uint32_t x = 0; x < image.width; ++x) {
        if (image.at(x, y) != 0) {
          row[x / 8] |= static_cast<std::uint8_t>(0x80u >> (x % 8));
        }
      }
      out.insert(out.end(), row.begin(), row.end());
    }
    return out;
  }
  if (image.levels > 256) {
    throw FormatError("netpbm: PGM output supports at most 256 levels");
  }
  header = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n" +
           std::to_string(image.levels - 1) + "\n";
  out.assign(header.begin(), header.end());
  for (auto p : image.pixels) {
    out.push_back(static_cast<std::uint8_t>(p));
  }
  return out;
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open " + path.string());
  }
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error("write failed for " + path.string());
  }
}

PlainImage read_netpbm(const std::filesystem::path& path) { return parse_netpbm(read_file(path)); }

void write_netpbm(const std::filesystem::path& path, const PlainImage& image) {
  write_file(path, format_netpbm(image));
}

}  // namespace cryptopix
