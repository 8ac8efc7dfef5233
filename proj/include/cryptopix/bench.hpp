#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cryptopix/image.hpp"

namespace cryptopix {

/// One timing measurement: the median over repetitions.
struct BenchRow {
  std::string stage;  // encrypt, decrypt, pre, server, post
  std::string op;
  unsigned bits = 0;
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  double seconds = 0;
  std::optional<double> expansion;
};

struct BenchOptions {
  unsigned reps = 3;
  unsigned threads = 1;
  double precision = 1e-8;
  std::optional<std::uint64_t> seed;
};

enum class BenchOp { negate, brightness, lpf, sobel, sharpen, erosion, dilation, equalization };

inline constexpr BenchOp kAllBenchOps[] = {BenchOp::negate,  BenchOp::brightness, BenchOp::lpf,
                                           BenchOp::sobel,   BenchOp::sharpen,    BenchOp::erosion,
                                           BenchOp::dilation, BenchOp::equalization};

std::string_view to_string(BenchOp op);
std::optional<BenchOp> parse_bench_op(std::string_view name);

/// Whole-image encrypt and decrypt at each key size. Encrypt rows carry the
/// serialized expansion factor.
std::vector<BenchRow> bench_crypto(std::span<const unsigned> key_bits, const PlainImage& image,
                                   const BenchOptions& options = {});

/// Pre / server / post split per operation. Image encryption and decryption
/// are excluded (bench_crypto covers them); pre is any extra client work
/// before the request, post is finishing after decryption. Morphology runs on
/// `binary`, everything else on `gray`.
std::vector<BenchRow> bench_ops(unsigned key_bits, const PlainImage& gray, const PlainImage& binary,
                                std::span<const BenchOp> ops, const BenchOptions& options = {});

struct TrendCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Encrypt time strictly increasing in key bits, decrypt faster than encrypt,
/// expansion within 10% of k/4.
std::vector<TrendCheck> check_crypto_trends(std::span<const BenchRow> rows);

/// Sharpen is the costliest server op; erosion and dilation server times agree
/// within `morph_tolerance` (relative to the larger); equalization server time
/// is at least 100x below LPF.
std::vector<TrendCheck> check_op_trends(std::span<const BenchRow> rows,
                                        double morph_tolerance = 0.25);

std::string bench_csv_header();
std::string to_csv(const BenchRow& row);

/// One line per (op, bits, size) with pre, server and post side by side.
std::string bench_wide_header();
std::vector<std::string> to_wide_csv(std::span<const BenchRow> rows);

}  // namespace cryptopix
