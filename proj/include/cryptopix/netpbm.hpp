#pragma once

#include <filesystem>
#include <span>

#include "cryptopix/bytes.hpp"
#include "cryptopix/image.hpp"

namespace cryptopix {

/// Parses binary PGM (P5, maxval <= 255, levels = maxval + 1) or PBM (P4, levels = 2).
/// PBM bit 1 maps to pixel value 1.
PlainImage parse_netpbm(std::span<const std::uint8_t> bytes);

/// P4 for binary images (levels == 2), P5 otherwise.
Bytes format_netpbm(const PlainImage& image);

PlainImage read_netpbm(const std::filesystem::path& path);
void write_netpbm(const std::filesystem::path& path, const PlainImage& image);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace cryptopix
