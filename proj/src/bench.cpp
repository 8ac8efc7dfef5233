#include "cryptopix/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "cryptopix/client_post.hpp"
#include "cryptopix/decryption.hpp"
#include "cryptopix/kernels.hpp"
#include "cryptopix/paillier_private.hpp"
#include "cryptopix/secure_ops.hpp"

namespace cryptopix {
namespace {

double seconds_of(const std::function<void()>& body) {
  auto start = std::chrono::steady_clock::now();
  body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double median(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const std::size_t mid = samples.size() / 2;
  return samples.size() % 2 == 1 ? samples[mid] : 0.5 * (samples[mid - 1] + samples[mid]);
}

double median_seconds(unsigned reps, const std::function<void()>& body) {
  std::vector<double> samples;
  for (unsigned i = 0; i < std::max(reps, 1u); ++i) {
    samples.push_back(seconds_of(body));
  }
  return median(std::move(samples));
}

const BenchRow* find_row(std::span<const BenchRow> rows, std::string_view stage,
                         std::string_view op) {
  for (const auto& row : rows) {
    if (row.stage == stage && row.op == op) {
      return &row;
    }
  }
  return nullptr;
}

std::string seconds_text(double s) {
  std::ostringstream out;
  out.precision(6);
  out << s << "s";
  return out.str();
}

}  // namespace

std::string_view to_string(BenchOp op) {
  switch (op) {
    case BenchOp::negate: return "negate";
    case BenchOp::brightness: return "brightness";
    case BenchOp::lpf: return "lpf";
    case BenchOp::sobel: return "sobel";
    case BenchOp::sharpen: return "sharpen";
    case BenchOp::erosion: return "erosion";
    case BenchOp::dilation: return "dilation";
    case BenchOp::equalization: return "equalization";
  }
  return "unknown";
}

std::optional<BenchOp> parse_bench_op(std::string_view name) {
  for (BenchOp op : kAllBenchOps) {
    if (to_string(op) == name) {
      return op;
    }
  }
  return std::nullopt;
}

std::vector<BenchRow> bench_crypto(std::span<const unsigned> key_bits, const PlainImage& image,
                                   const BenchOptions& options) {
  std::vector<BenchRow> rows;
  auto rng = make_entropy(options.seed);
  const Precision precision(options.precision);
  for (unsigned bits : key_bits) {
    Keypair keys = keygen(bits, *rng);
    EncryptedImage encrypted;
    const double enc = median_seconds(options.reps, [&] {
      encrypted = encrypt_image(keys.public_key, image, precision, *rng, options.threads);
    });
    const double dec = median_seconds(options.reps, [&] {
      (void)decrypt_image(keys.private_key, encrypted, true, options.threads);
    });
    rows.push_back({"encrypt", "image", bits, image.width, image.height, enc,
                    expansion_factor(encrypted)});
    rows.push_back({"decrypt", "image", bits, image.width, image.height, dec, std::nullopt});
  }
  return rows;
}

std::vector<BenchRow> bench_ops(unsigned key_bits, const PlainImage& gray, const PlainImage& binary,
                                std::span<const BenchOp> ops, const BenchOptions& options) {
  auto rng = make_entropy(options.seed);
  const Keypair keys = keygen(key_bits, *rng);
  const PublicKey& pk = keys.public_key;
  const PrivateKey& sk = keys.private_key;
  const Precision precision(options.precision);
  const ExecOptions exec{options.threads, rng.get()};

  const EncryptedImage enc_gray = encrypt_image(pk, gray, precision, *rng, options.threads);
  const EncryptedImage enc_binary = encrypt_image(pk, binary, precision, *rng, options.threads);
  const Kernel lpf = Kernel::box(3, 3);
  const auto [h1, h2] = gradient_kernels(GradientOperator::sobel);
  const StructuringElement element = StructuringElement::square(3);
  const std::uint32_t levels = gray.levels;

  // Inputs each stage needs, produced by one untimed warm-up pass.
  EncryptedNumber brightness_value = en_encrypt(pk, encode(pk, 50.0, precision), *rng);
  EncryptedNumbers histogram =
      encrypt_histogram(pk, compute_histogram(gray, levels), precision, *rng, options.threads);
  RealImage gx;
  RealImage gy;
  PlainImage morph_sums;
  std::vector<double> lut;

  struct Stages {
    BenchOp op;
    std::function<void()> pre;
    std::function<void()> server;
    std::function<void()> post;
    std::vector<double> samples[3];
  };
  std::vector<Stages> tasks;
  for (BenchOp op : ops) {
    Stages t{op, {}, {}, {}, {}};
    switch (op) {
      case BenchOp::negate:
        t.server = [&] { (void)op_negate(pk, enc_gray, exec); };
        break;
      case BenchOp::brightness:
        t.pre = [&] { brightness_value = en_encrypt(pk, encode(pk, 50.0, precision), *rng); };
        t.server = [&] { (void)op_brightness(pk, enc_gray, brightness_value, exec); };
        break;
      case BenchOp::lpf:
        t.server = [&] { (void)op_convolve(pk, enc_gray, lpf, exec); };
        break;
      case BenchOp::sobel: {
        auto g = op_gradient(pk, enc_gray, h1, h2, exec);
        gx = decrypt_image_real(sk, g.first, options.threads);
        gy = decrypt_image_real(sk, g.second, options.threads);
        t.server = [&] { (void)op_gradient(pk, enc_gray, h1, h2, exec); };
        t.post = [&] { (void)finish_gradient(gx, gy); };
        break;
      }
      case BenchOp::sharpen:
        t.server = [&] { (void)op_sharpen(pk, enc_gray, 1.0, lpf, exec); };
        break;
      case BenchOp::erosion:
      case BenchOp::dilation: {
        morph_sums = decrypt_image(sk, op_morph_sum(pk, enc_binary, element, exec), false,
                                   options.threads);
        const MorphMode mode = op == BenchOp::erosion ? MorphMode::erosion : MorphMode::dilation;
        t.server = [&] { (void)op_morph_sum(pk, enc_binary, element, exec); };
        t.post = [&, mode] { (void)finish_morphology(morph_sums, element, mode); };
        break;
      }
      case BenchOp::equalization:
        lut = decrypt_values(
            sk, op_equalize_transform(pk, histogram, levels, gray.width, gray.height, exec),
            options.threads);
        t.pre = [&] {
          histogram = encrypt_histogram(pk, compute_histogram(gray, levels), precision, *rng,
                                        options.threads);
        };
        t.server = [&] {
          (void)op_equalize_transform(pk, histogram, levels, gray.width, gray.height, exec);
        };
        t.post = [&] { (void)finish_equalization(gray, lut); };
        break;
    }
    tasks.push_back(std::move(t));
  }

  // Round-robin over ops so a slow stretch of machine time hits every op
  // rather than all repetitions of one.
  for (unsigned rep = 0; rep < std::max(options.reps, 1u); ++rep) {
    for (auto& t : tasks) {
      const std::function<void()>* stages[3] = {&t.pre, &t.server, &t.post};
      for (int s = 0; s < 3; ++s) {
        t.samples[s].push_back(*stages[s] ? seconds_of(*stages[s]) : 0.0);
      }
    }
  }

  std::vector<BenchRow> rows;
  for (auto& t : tasks) {
    const PlainImage& image =
        (t.op == BenchOp::erosion || t.op == BenchOp::dilation) ? binary : gray;
    const std::string name(to_string(t.op));
    const char* stage_names[3] = {"pre", "server", "post"};
    for (int s = 0; s < 3; ++s) {
      rows.push_back({stage_names[s], name, key_bits, image.width, image.height,
                      median(t.samples[s]), std::nullopt});
    }
  }
  return rows;
}

std::vector<TrendCheck> check_crypto_trends(std::span<const BenchRow> rows) {
  std::map<unsigned, double> enc;
  std::map<unsigned, double> dec;
  std::vector<TrendCheck> checks;
  TrendCheck expansion{"expansion within 10% of k/4", true, ""};
  for (const auto& row : rows) {
    if (row.stage == "encrypt") {
      enc[row.bits] = row.seconds;
      if (row.expansion) {
        const double target = row.bits / 4.0;
        const bool ok = std::abs(*row.expansion - target) <= 0.1 * target;
        expansion.passed = expansion.passed && ok;
        expansion.detail += std::to_string(row.bits) + ":" + std::to_string(*row.expansion) + " ";
      }
    } else if (row.stage == "decrypt") {
      dec[row.bits] = row.seconds;
    }
  }

  TrendCheck monotone{"encrypt time increases with key bits", enc.size() >= 2, ""};
  double previous = -1;
  for (const auto& [bits, s] : enc) {
    monotone.passed = monotone.passed && s > previous;
    previous = s;
    monotone.detail += std::to_string(bits) + ":" + seconds_text(s) + " ";
  }
  checks.push_back(monotone);

  TrendCheck faster{"decrypt faster than encrypt", !dec.empty(), ""};
  for (const auto& [bits, s] : dec) {
    const bool ok = enc.count(bits) != 0 && s < enc[bits];
    faster.passed = faster.passed && ok;
    faster.detail += std::to_string(bits) + ":" + seconds_text(s) + " ";
  }
  checks.push_back(faster);
  checks.push_back(expansion);
  return checks;
}

std::vector<TrendCheck> check_op_trends(std::span<const BenchRow> rows, double morph_tolerance) {
  std::vector<TrendCheck> checks;

  TrendCheck costliest{"sharpen is the costliest server op", false, ""};
  if (const BenchRow* sharpen = find_row(rows, "server", "sharpen")) {
    costliest.passed = true;
    for (const auto& row : rows) {
      if (row.stage == "server" && row.op != "sharpen" && row.seconds >= sharpen->seconds) {
        costliest.passed = false;
        costliest.detail += row.op + " " + seconds_text(row.seconds) + " >= ";
      }
    }
    costliest.detail += "sharpen " + seconds_text(sharpen->seconds);
  } else {
    costliest.detail = "no sharpen row";
  }
  checks.push_back(costliest);

  TrendCheck morph{"erosion and dilation server times agree", false, ""};
  const BenchRow* erosion = find_row(rows, "server", "erosion");
  const BenchRow* dilation = find_row(rows, "server", "dilation");
  if (erosion != nullptr && dilation != nullptr) {
    const double larger = std::max(erosion->seconds, dilation->seconds);
    const double gap = std::abs(erosion->seconds - dilation->seconds);
    morph.passed = gap <= morph_tolerance * larger;
    morph.detail = "erosion " + seconds_text(erosion->seconds) + ", dilation " +
                   seconds_text(dilation->seconds);
  } else {
    morph.detail = "missing rows";
  }
  checks.push_back(morph);

  TrendCheck cheap{"equalization server time at least 100x below lpf", false, ""};
  const BenchRow* eq = find_row(rows, "server", "equalization");
  const BenchRow* lpf = find_row(rows, "server", "lpf");
  if (eq != nullptr && lpf != nullptr) {
    cheap.passed = eq->seconds * 100.0 <= lpf->seconds;
    cheap.detail = "equalization " + seconds_text(eq->seconds) + ", lpf " +
                   seconds_text(lpf->seconds) + ", ratio " +
                   std::to_string(lpf->seconds / std::max(eq->seconds, 1e-12));
  } else {
    cheap.detail = "missing rows";
  }
  checks.push_back(cheap);
  return checks;
}

std::string bench_csv_header() { return "stage,op,bits,width,height,seconds,expansion"; }

std::string to_csv(const BenchRow& row) {
  std::ostringstream out;
  out.precision(9);
  out << row.stage << ',' << row.op << ',' << row.bits << ',' << row.width << ',' << row.height
      << ',' << row.seconds << ',';
  if (row.expansion) {
    out << *row.expansion;
  }
  return out.str();
}

std::string bench_wide_header() { return "op,bits,width,height,pre,server,post"; }

std::vector<std::string> to_wide_csv(std::span<const BenchRow> rows) {
  struct Split {
    double pre = 0, server = 0, post = 0;
  };
  std::vector<std::string> keys;
  std::map<std::string, Split> splits;
  for (const auto& row : rows) {
    std::ostringstream key;
    key << row.op << ',' << row.bits << ',' << row.width << ',' << row.height;
    auto [it, inserted] = splits.try_emplace(key.str());
    if (inserted) {
      keys.push_back(key.str());
    }
    if (row.stage == "pre") {
      it->second.pre = row.seconds;
    } else if (row.stage == "server" || row.stage == "encrypt") {
      it->second.server = row.seconds;
    } else {
      it->second.post = row.seconds;
    }
  }
  std::vector<std::string> lines;
  for (const auto& key : keys) {
    const Split& s = splits[key];
    std::ostringstream out;
    out.precision(9);
    out << key << ',' << s.pre << ',' << s.server << ',' << s.post;
    lines.push_back(out.str());
  }
  return lines;
}

}  // namespace cryptopix
