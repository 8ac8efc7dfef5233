// cryptopix command-line client and server.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cryptopix/bench.hpp"
#include "cryptopix/client_post.hpp"
#include "cryptopix/decryption.hpp"
#include "cryptopix/netpbm.hpp"
#include "cryptopix/paillier_private.hpp"
#include "cryptopix/plain_reference.hpp"
#include "cryptopix/remote.hpp"
#include "cryptopix/server.hpp"

namespace fs = std::filesystem;
using namespace cryptopix;

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kKeyError = 3,
  kImageError = 4,
  kUnreachable = 5,
  kServerError = 6,
  kCryptoError = 7,
  kIoError = 8,
};

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& message) : std::runtime_error(message), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

[[noreturn]] void fail(int code, const std::string& message) { throw CliError(code, message); }

template <typename Fn>
auto guarded(int code, const std::string& what, Fn&& fn) {
  try {
    return fn();
  } catch (const CliError&) {
    throw;
  } catch (const std::exception& e) {
    fail(code, what + ": " + e.what());
  }
}

bool has_magic(const Bytes& bytes, std::string_view magic) {
  return bytes.size() >= magic.size() && std::equal(magic.begin(), magic.end(), bytes.begin());
}

PublicKey load_public_key(const fs::path& path) {
  return guarded(kKeyError, "key " + path.string(), [&] {
    Bytes bytes = read_file(path);
    if (has_magic(bytes, "CPXS")) {
      return PrivateKey::deserialize(bytes).public_key();
    }
    return PublicKey::deserialize(bytes);
  });
}

PrivateKey load_private_key(const fs::path& path) {
  return guarded(kKeyError, "key " + path.string(),
                 [&] { return PrivateKey::deserialize(read_file(path)); });
}

PlainImage load_plain(const fs::path& path) {
  return guarded(kImageError, "image " + path.string(), [&] { return read_netpbm(path); });
}

Bytes load_container(const fs::path& path) {
  return guarded(kImageError, "input " + path.string(), [&] { return read_file(path); });
}

EncryptedImage load_encrypted(const fs::path& path) {
  return guarded(kImageError, "encrypted image " + path.string(),
                 [&] { return deserialize_image(read_file(path)); });
}

void save(const fs::path& path, std::span<const std::uint8_t> bytes) {
  guarded(kIoError, "output " + path.string(), [&] {
    write_file(path, bytes);
    return 0;
  });
}

void save_text(const fs::path& path, const std::string& text) {
  save(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// Real rasters as CSV: "width,height" then one line of comma-separated values per row.
std::string format_raster(const RealImage& image) {
  std::ostringstream out;
  out.precision(17);
  out << image.width << ',' << image.height << '\n';
  for (std::uint32_t y = 0; y < image.height; ++y) {
    for (std::uint32_t x = 0; x < image.width; ++x) {
      out << (x == 0 ? "" : ",") << image.at(x, y);
    }
    out << '\n';
  }
  return out.str();
}

RealImage parse_raster(const fs::path& path) {
  return guarded(kImageError, "raster " + path.string(), [&] {
    Bytes bytes = read_file(path);
    std::string text(bytes.begin(), bytes.end());
    std::replace(text.begin(), text.end(), ',', ' ');
    std::istringstream in(text);
    RealImage image;
    if (!(in >> image.width >> image.height)) {
      throw FormatError("expected 'width,height' header");
    }
    const std::size_t count = static_cast<std::size_t>(image.width) * image.height;
    double v = 0;
    while (image.values.size() <= count && in >> v) {
      image.values.push_back(v);
    }
    if (image.values.size() != count || !(in >> std::ws).eof()) {
      throw FormatError("expected exactly " + std::to_string(count) + " values");
    }
    return image;
  });
}

RealImage load_any_raster(const fs::path& path) {
  if (path.extension() == ".csv") {
    return parse_raster(path);
  }
  return to_real(load_plain(path));
}

Precision make_precision(double value, std::uint32_t base) {
  return guarded(kUsage, "precision", [&] { return Precision(value, base); });
}

// --- operation parameters shared by apply and reference ---------------------------------------

struct OpOptions {
  std::string op;
  std::optional<double> value;
  std::string kernel;
  std::string kernel_y;
  std::string gradient_operator = "sobel";
  double k = 1.0;
  std::string element = "square3";

  Kernel lpf() const {
    return guarded(kUsage, "kernel", [&] { return parse_kernel(kernel.empty() ? "box3" : kernel); });
  }
  Kernel convolution() const {
    if (kernel.empty()) {
      fail(kUsage, "--op convolve needs --kernel");
    }
    return guarded(kUsage, "kernel", [&] { return parse_kernel(kernel); });
  }
  std::pair<Kernel, Kernel> gradient() const {
    if (!kernel.empty() || !kernel_y.empty()) {
      if (kernel.empty() || kernel_y.empty()) {
        fail(kUsage, "custom gradients need both --kernel and --kernel-y");
      }
      return guarded(kUsage, "kernel",
                     [&] { return std::make_pair(parse_kernel(kernel), parse_kernel(kernel_y)); });
    }
    auto op = parse_gradient_operator(gradient_operator);
    if (!op) {
      fail(kUsage, "unknown gradient operator '" + gradient_operator + "'");
    }
    return gradient_kernels(*op);
  }
  StructuringElement structuring_element() const {
    return guarded(kUsage, "structuring element", [&] { return parse_structuring_element(element); });
  }
  double brightness() const {
    if (!value) {
      fail(kUsage, "--op brightness needs --value");
    }
    return *value;
  }
};

const std::vector<std::string> kApplyOps{"negate",  "brightness", "convolve", "lpf",    "gradient",
                                         "sharpen", "erode",      "dilate",   "equalize"};

void add_op_options(CLI::App* cmd, OpOptions& o) {
  cmd->add_option("--op", o.op, "Operation")->required()->check(CLI::IsMember(kApplyOps));
  cmd->add_option("--value", o.value, "Brightness offset");
  cmd->add_option("--kernel", o.kernel,
                  "Kernel: boxN, identityN or rows like '1,2,1;2,4,2;1,2,1/16' "
                  "(lpf and sharpen default to box3)");
  cmd->add_option("--kernel-y", o.kernel_y, "Vertical kernel for a custom gradient");
  cmd->add_option("--operator", o.gradient_operator, "Gradient preset")
      ->check(CLI::IsMember({"sobel", "prewitt", "robinson", "kirsch"}));
  cmd->add_option("--k", o.k, "Sharpening strength (1 = unsharp masking)");
  cmd->add_option("--se", o.element, "Structuring element: squareN, NxN, crossN or '010;111;010'");
}

// --- subcommands ----------------------------------------------------------------------------

struct KeygenArgs {
  unsigned bits = 1024;
  std::string out;
  std::optional<std::uint64_t> seed;
};

int cmd_keygen(const KeygenArgs& a) {
  auto rng = make_entropy(a.seed);
  Keypair keys = keygen(a.bits, *rng);
  save(a.out + ".pub", keys.public_key.serialize());
  save(a.out + ".sec", keys.private_key.serialize());
  std::cerr << "wrote " << a.out << ".pub and " << a.out << ".sec (" << a.bits << " bits, key "
            << to_hex(keys.public_key.fingerprint()) << ")\n";
  return kOk;
}

struct EncryptArgs {
  std::string key, in, out;
  double precision = kDefaultPrecision;
  std::uint32_t base = kDefaultBase;
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
};

int cmd_encrypt(const EncryptArgs& a) {
  const PublicKey pk = load_public_key(a.key);
  const PlainImage image = load_plain(a.in);
  auto rng = make_entropy(a.seed);
  EncryptedImage e = encrypt_image(pk, image, make_precision(a.precision, a.base), *rng, a.threads);
  save(a.out, serialize(e));
  return kOk;
}

struct DecryptArgs {
  std::string key, in, in_y, out, raw, raw_y, image;
  std::string finish = "none";
  std::string element = "square3";
  bool no_clamp = false;
  unsigned threads = 0;
};

int cmd_decrypt(const DecryptArgs& a) {
  const PrivateKey sk = load_private_key(a.key);
  const Bytes input = load_container(a.in);

  if (a.finish == "equalize") {
    if (a.image.empty()) {
      fail(kUsage, "--finish equalize needs --image (the plaintext image)");
    }
    const EncryptedNumbers t = guarded(kImageError, "transform " + a.in,
                                       [&] { return deserialize_numbers(input); });
    const std::vector<double> lut = decrypt_values(sk, t, a.threads);
    const PlainImage out = finish_equalization(load_plain(a.image), lut);
    if (!a.out.empty()) {
      write_netpbm(a.out, out);
    }
    if (!a.raw.empty()) {
      save_text(a.raw, format_raster(RealImage{static_cast<std::uint32_t>(lut.size()), 1, lut}));
    }
    return kOk;
  }

  if (has_magic(input, "CPXN")) {
    const EncryptedNumbers values = guarded(kImageError, "values " + a.in,
                                            [&] { return deserialize_numbers(input); });
    const std::vector<double> plain = decrypt_values(sk, values, a.threads);
    std::ostringstream text;
    text.precision(17);
    for (double v : plain) {
      text << v << '\n';
    }
    if (a.out.empty()) {
      std::cout << text.str();
    } else {
      save_text(a.out, text.str());
    }
    return kOk;
  }

  const EncryptedImage enc = guarded(kImageError, "encrypted image " + a.in,
                                     [&] { return deserialize_image(input); });

  if (a.finish == "gradient") {
    if (a.in_y.empty()) {
      fail(kUsage, "--finish gradient needs --in-y");
    }
    const RealImage gx = decrypt_image_real(sk, enc, a.threads);
    const RealImage gy = decrypt_image_real(sk, load_encrypted(a.in_y), a.threads);
    const GradientField field = finish_gradient(gx, gy);
    if (!a.out.empty()) {
      write_netpbm(a.out, field.display());
    }
    if (!a.raw.empty()) {
      save_text(a.raw, format_raster(gx));
    }
    if (!a.raw_y.empty()) {
      save_text(a.raw_y, format_raster(gy));
    }
    return kOk;
  }

  if (a.finish == "erode" || a.finish == "dilate") {
    const StructuringElement element =
        guarded(kUsage, "structuring element", [&] { return parse_structuring_element(a.element); });
    const PlainImage sums = decrypt_image(sk, enc, false, a.threads);
    const PlainImage out = finish_morphology(
        sums, element, a.finish == "erode" ? MorphMode::erosion : MorphMode::dilation);
    if (a.out.empty()) {
      fail(kUsage, "--out is required");
    }
    write_netpbm(a.out, out);
    return kOk;
  }

  if (!a.raw.empty()) {
    save_text(a.raw, format_raster(decrypt_image_real(sk, enc, a.threads)));
  }
  if (!a.out.empty()) {
    write_netpbm(a.out, decrypt_image(sk, enc, !a.no_clamp, a.threads));
  } else if (a.raw.empty()) {
    fail(kUsage, "--out or --raw is required");
  }
  return kOk;
}

struct ApplyArgs {
  OpOptions op;
  std::string key, in, out, out_y, server;
  bool local = false;
  double precision = kDefaultPrecision;
  std::uint32_t base = kDefaultBase;
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
};

int cmd_apply(const ApplyArgs& a) {
  const PublicKey pk = load_public_key(a.key);
  auto rng = make_entropy(a.seed);

  std::optional<Endpoint> endpoint;
  if (!a.server.empty()) {
    endpoint = guarded(kUsage, "--server", [&] { return Endpoint::parse(a.server); });
  } else if (!a.local) {
    endpoint = guarded(kUsage, kAddressEnv, [] { return endpoint_from_env(); });
  }

  ServerConfig local_config;
  local_config.threads = a.threads;
  local_config.seed = a.seed;
  Dispatcher dispatcher(local_config);
  std::unique_ptr<Transport> transport;
  if (endpoint) {
    transport = std::make_unique<TcpTransport>(*endpoint);
  } else {
    transport = std::make_unique<LoopbackTransport>(
        [&dispatcher](std::span<const std::uint8_t> frame) { return dispatcher.handle_frame(frame); });
  }
  RemoteOps remote(*transport, pk);
  const std::string& op = a.op.op;

  if (op == "equalize") {
    const PlainImage image = load_plain(a.in);
    const auto histogram = compute_histogram(image, image.levels);
    const EncryptedNumbers h =
        encrypt_histogram(pk, histogram, make_precision(a.precision, a.base), *rng, a.threads);
    save(a.out, serialize(remote.equalize_transform(h, image.levels, image.width, image.height)));
    return kOk;
  }

  const EncryptedImage image = load_encrypted(a.in);
  EncryptedImage result;
  if (op == "negate") {
    result = remote.negate(image);
  } else if (op == "brightness") {
    const Precision precision = make_precision(a.precision, image.base);
    result = remote.brightness(image, en_encrypt(pk, encode(pk, a.op.brightness(), precision), *rng));
  } else if (op == "convolve") {
    result = remote.convolve(image, a.op.convolution());
  } else if (op == "lpf") {
    result = remote.convolve(image, a.op.lpf());
  } else if (op == "gradient") {
    if (a.out_y.empty()) {
      fail(kUsage, "--op gradient needs --out-y for the vertical component");
    }
    auto [h1, h2] = a.op.gradient();
    auto [gx, gy] = remote.gradient(image, h1, h2);
    save(a.out, serialize(gx));
    save(a.out_y, serialize(gy));
    return kOk;
  } else if (op == "sharpen") {
    result = remote.sharpen(image, a.op.k, a.op.lpf());
  } else {
    result = remote.morph_sum(image, a.op.structuring_element());
  }
  save(a.out, serialize(result));
  return kOk;
}

struct ReferenceArgs {
  OpOptions op;
  std::string in, out, raw, raw_y;
};

int cmd_reference(const ReferenceArgs& a) {
  const PlainImage image = load_plain(a.in);
  const std::string& op = a.op.op;
  std::optional<PlainImage> plain;
  std::optional<RealImage> real;
  if (op == "negate") {
    plain = ref_negate(image);
  } else if (op == "brightness") {
    plain = ref_brightness(image, a.op.brightness());
    RealImage shifted = to_real(image);
    for (double& v : shifted.values) {
      v += a.op.brightness();
    }
    real = shifted;
  } else if (op == "convolve" || op == "lpf") {
    real = ref_convolve(image, op == "lpf" ? a.op.lpf() : a.op.convolution());
  } else if (op == "sharpen") {
    real = ref_sharpen(image, a.op.k, a.op.lpf());
  } else if (op == "gradient") {
    auto [h1, h2] = a.op.gradient();
    auto [gx, gy] = ref_gradient(image, h1, h2);
    if (!a.out.empty()) {
      write_netpbm(a.out, finish_gradient(gx, gy).display());
    }
    if (!a.raw.empty()) {
      save_text(a.raw, format_raster(gx));
    }
    if (!a.raw_y.empty()) {
      save_text(a.raw_y, format_raster(gy));
    }
    return kOk;
  } else if (op == "erode" || op == "dilate") {
    plain = ref_morph(image, a.op.structuring_element(),
                      op == "erode" ? MorphMode::erosion : MorphMode::dilation);
  } else {
    plain = ref_equalize(image);
    if (!a.raw.empty()) {
      std::vector<double> lut = ref_equalize_lut(image);
      save_text(a.raw, format_raster(RealImage{static_cast<std::uint32_t>(lut.size()), 1, lut}));
    }
    real.reset();
  }
  if (!plain && real) {
    plain = quantize(*real, image.levels, true);
  }
  if (!a.out.empty()) {
    write_netpbm(a.out, *plain);
  }
  if (!a.raw.empty() && op != "equalize") {
    save_text(a.raw, format_raster(real ? *real : to_real(*plain)));
  }
  return kOk;
}

struct CompareArgs {
  std::string a, b;
  std::string label = "op";
  double precision = kDefaultPrecision;
  bool no_header = false;
};

int cmd_compare(const CompareArgs& a) {
  const RealImage ed = load_any_raster(a.a);
  const RealImage pd = load_any_raster(a.b);
  const ErrorReport report =
      guarded(kImageError, "compare", [&] { return compare(ed, pd); });
  if (!a.no_header) {
    std::cout << error_csv_header() << '\n';
  }
  std::cout << to_csv(a.label, a.precision, report) << '\n';
  return kOk;
}

struct BenchArgs {
  std::vector<unsigned> bits{256, 512};
  bool with_1024 = false;
  std::vector<std::string> ops;
  bool crypto = false;
  std::string image, binary, out;
  std::string format = "long";
  unsigned reps = 3;
  unsigned threads = 1;
  double precision = kDefaultPrecision;
  bool check = false;
  std::optional<std::uint64_t> seed;
};

// Equalization cost depends on the level count only, so its margin over the
// per-pixel ops grows with image area; 128x128 keeps that margin comfortable.
constexpr std::uint32_t kBenchSide = 128;

PlainImage synthetic_gray() {
  PlainImage img = PlainImage::filled(kBenchSide, kBenchSide, 0);
  for (std::uint32_t y = 0; y < kBenchSide; ++y) {
    for (std::uint32_t x = 0; x < kBenchSide; ++x) {
      img.at(x, y) = static_cast<std::int32_t>((x * 3 + y * 2 + (x * y) % 17) % 256);
    }
  }
  return img;
}

PlainImage synthetic_binary() {
  PlainImage img = PlainImage::filled(kBenchSide, kBenchSide, 0, 2);
  for (std::uint32_t y = 0; y < kBenchSide; ++y) {
    for (std::uint32_t x = 0; x < kBenchSide; ++x) {
      img.at(x, y) = ((x / 5 + y / 7) % 3 == 0) ? 1 : 0;
    }
  }
  return img;
}

int cmd_bench(const BenchArgs& a) {
  BenchOptions options;
  options.reps = a.reps;
  options.threads = a.threads;
  options.precision = a.precision;
  options.seed = a.seed;
  const PlainImage gray = a.image.empty() ? synthetic_gray() : load_plain(a.image);
  const PlainImage binary = a.binary.empty() ? synthetic_binary() : load_plain(a.binary);
  if (binary.levels != 2) {
    fail(kImageError, "--binary must be a PBM (two-level) image");
  }

  std::vector<unsigned> bits = a.bits;
  if (a.with_1024 && std::find(bits.begin(), bits.end(), 1024u) == bits.end()) {
    bits.push_back(1024);
  }
  std::vector<BenchOp> ops;
  for (const auto& name : a.ops) {
    auto op = parse_bench_op(name);
    if (!op) {
      fail(kUsage, "unknown bench op '" + name + "'");
    }
    ops.push_back(*op);
  }
  const bool run_crypto = a.crypto || ops.empty();
  if (ops.empty() && !a.crypto) {
    ops.assign(std::begin(kAllBenchOps), std::end(kAllBenchOps));
  }

  std::vector<BenchRow> rows;
  std::vector<TrendCheck> checks;
  if (run_crypto) {
    auto crypto = bench_crypto(bits, gray, options);
    auto c = check_crypto_trends(crypto);
    checks.insert(checks.end(), c.begin(), c.end());
    rows.insert(rows.end(), crypto.begin(), crypto.end());
  }
  for (unsigned b : bits) {
    if (ops.empty()) {
      break;
    }
    auto op_rows = bench_ops(b, gray, binary, ops, options);
    if (ops.size() == std::size(kAllBenchOps)) {
      auto c = check_op_trends(op_rows);
      for (auto& check : c) {
        check.name += " (" + std::to_string(b) + " bits)";
      }
      checks.insert(checks.end(), c.begin(), c.end());
    }
    rows.insert(rows.end(), op_rows.begin(), op_rows.end());
  }

  std::ostringstream csv;
  if (a.format == "wide") {
    csv << bench_wide_header() << '\n';
    for (const auto& line : to_wide_csv(rows)) {
      csv << line << '\n';
    }
  } else {
    csv << bench_csv_header() << '\n';
    for (const auto& row : rows) {
      csv << to_csv(row) << '\n';
    }
  }
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    save_text(a.out, csv.str());
  }

  bool all_passed = true;
  for (const auto& c : checks) {
    std::cerr << (c.passed ? "trend ok   " : "trend FAIL ") << c.name << ": " << c.detail << '\n';
    all_passed = all_passed && c.passed;
  }
  return (a.check && !all_passed) ? kFailure : kOk;
}

struct ServeArgs {
  std::string listen;
  std::string port_file;
  unsigned threads = 0;
  std::uint64_t max_payload = std::uint64_t{1} << 30;
  std::optional<std::uint64_t> seed;
};

int cmd_serve(const ServeArgs& a) {
  Endpoint endpoint{"127.0.0.1", 7788};
  if (!a.listen.empty()) {
    endpoint = guarded(kUsage, "--listen", [&] { return Endpoint::parse(a.listen); });
  } else if (auto env = guarded(kUsage, kAddressEnv, [] { return endpoint_from_env(); })) {
    endpoint = *env;
  }

  // Block the shutdown signals before any thread starts so only sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ServerConfig config;
  config.threads = a.threads;
  config.max_payload_bytes = a.max_payload;
  config.seed = a.seed;
  TcpServer server(endpoint, Dispatcher(config));
  guarded(kUnreachable, "listen on " + endpoint.to_string(), [&] {
    server.start();
    return 0;
  });
  std::cerr << "serving on " << endpoint.host << ":" << server.port() << '\n';
  if (!a.port_file.empty()) {
    const fs::path tmp = a.port_file + ".tmp";
    save_text(tmp, std::to_string(server.port()) + "\n");
    fs::rename(tmp, a.port_file);
  }
  int received = 0;
  sigwait(&signals, &received);
  std::cerr << "shutting down after " << server.requests_handled() << " requests\n";
  server.stop();
  return kOk;
}

int exit_code_for(const std::exception& e) {
  if (auto* cli = dynamic_cast<const CliError*>(&e)) {
    return cli->code();
  }
  if (dynamic_cast<const ConnectionError*>(&e) != nullptr) {
    return kUnreachable;
  }
  if (dynamic_cast<const ProtocolError*>(&e) != nullptr) {
    return kServerError;
  }
  if (dynamic_cast<const KeyMismatchError*>(&e) != nullptr ||
      dynamic_cast<const OverflowDetectedError*>(&e) != nullptr ||
      dynamic_cast<const EncodingOverflowError*>(&e) != nullptr ||
      dynamic_cast<const MalformedCiphertextError*>(&e) != nullptr ||
      dynamic_cast<const AlignmentError*>(&e) != nullptr ||
      dynamic_cast<const RangeError*>(&e) != nullptr) {
    return kCryptoError;
  }
  if (dynamic_cast<const FormatError*>(&e) != nullptr) {
    return kImageError;
  }
  if (dynamic_cast<const ParameterError*>(&e) != nullptr ||
      dynamic_cast<const ShapeError*>(&e) != nullptr) {
    return kUsage;
  }
  return kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cryptopix: image processing on Paillier-encrypted images"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "cryptopix 1.0");

  const auto bits_check = CLI::IsMember({256u, 512u, 1024u, 2048u, 3072u});
  const auto precision_check = CLI::Range(std::numeric_limits<double>::min(), 1.0);

  KeygenArgs keygen_args;
  auto* keygen_cmd = app.add_subcommand("keygen", "Generate a keypair (PREFIX.pub, PREFIX.sec)");
  keygen_cmd->add_option("--bits", keygen_args.bits, "Modulus length")
      ->check(bits_check)
      ->capture_default_str();
  keygen_cmd->add_option("--out", keygen_args.out, "Output path prefix")->required();
  keygen_cmd->add_option("--seed", keygen_args.seed, "Deterministic seed (testing only)");

  EncryptArgs enc_args;
  auto* encrypt_cmd = app.add_subcommand("encrypt", "Encrypt a PGM/PBM image");
  encrypt_cmd->add_option("--key", enc_args.key, "Public (or secret) key file")->required();
  encrypt_cmd->add_option("--in", enc_args.in, "Input PGM/PBM")->required();
  encrypt_cmd->add_option("--out", enc_args.out, "Output encrypted image")->required();
  encrypt_cmd->add_option("--precision", enc_args.precision)
      ->check(precision_check)
      ->capture_default_str();
  encrypt_cmd->add_option("--base", enc_args.base, "Encoding radix")
      ->check(CLI::Range(2u, 1u << 16))
      ->capture_default_str();
  encrypt_cmd->add_option("--threads", enc_args.threads, "Worker threads (0 = all cores)");
  encrypt_cmd->add_option("--seed", enc_args.seed, "Deterministic seed (testing only)");

  DecryptArgs dec_args;
  auto* decrypt_cmd = app.add_subcommand("decrypt", "Decrypt and optionally finish a result");
  decrypt_cmd->add_option("--key", dec_args.key, "Secret key file")->required();
  decrypt_cmd->add_option("--in", dec_args.in, "Encrypted image or value file")->required();
  decrypt_cmd->add_option("--in-y", dec_args.in_y, "Vertical gradient component");
  decrypt_cmd->add_option("--out", dec_args.out, "Output PGM/PBM (or text for value files)");
  decrypt_cmd->add_option("--raw", dec_args.raw, "Unrounded values as CSV raster");
  decrypt_cmd->add_option("--raw-y", dec_args.raw_y, "Unrounded vertical gradient as CSV");
  decrypt_cmd->add_option("--finish", dec_args.finish, "Client-side finishing step")
      ->check(CLI::IsMember({"none", "gradient", "erode", "dilate", "equalize"}))
      ->capture_default_str();
  decrypt_cmd->add_option("--se", dec_args.element, "Structuring element for erode/dilate");
  decrypt_cmd->add_option("--image", dec_args.image, "Plaintext image for --finish equalize");
  decrypt_cmd->add_flag("--no-clamp", dec_args.no_clamp, "Fail on out-of-range pixels");
  decrypt_cmd->add_option("--threads", dec_args.threads, "Worker threads (0 = all cores)");

  ApplyArgs apply_args;
  auto* apply_cmd = app.add_subcommand("apply", "Run an operation on an encrypted image");
  add_op_options(apply_cmd, apply_args.op);
  apply_cmd->add_option("--key", apply_args.key, "Public key file")->required();
  apply_cmd->add_option("--in", apply_args.in,
                        "Encrypted image (plaintext PGM for --op equalize)")
      ->required();
  apply_cmd->add_option("--out", apply_args.out, "Encrypted result")->required();
  apply_cmd->add_option("--out-y", apply_args.out_y, "Vertical gradient component");
  auto* server_opt = apply_cmd->add_option(
      "--server", apply_args.server,
      std::string("Server host:port (default: $") + kAddressEnv + ", else in-process)");
  apply_cmd->add_flag("--local", apply_args.local, "Run in-process")->excludes(server_opt);
  apply_cmd->add_option("--precision", apply_args.precision,
                        "Precision for client-encrypted values")
      ->check(precision_check);
  apply_cmd->add_option("--base", apply_args.base, "Encoding radix for the histogram")
      ->check(CLI::Range(2u, 1u << 16));
  apply_cmd->add_option("--threads", apply_args.threads, "Worker threads (0 = all cores)");
  apply_cmd->add_option("--seed", apply_args.seed, "Deterministic seed (testing only)");

  ReferenceArgs ref_args;
  auto* reference_cmd =
      app.add_subcommand("reference", "Run an operation on a plaintext image");
  add_op_options(reference_cmd, ref_args.op);
  reference_cmd->add_option("--in", ref_args.in, "Input PGM/PBM")->required();
  reference_cmd->add_option("--out", ref_args.out, "Output PGM/PBM");
  reference_cmd->add_option("--raw", ref_args.raw, "Unrounded result as CSV raster");
  reference_cmd->add_option("--raw-y", ref_args.raw_y, "Vertical gradient as CSV raster");

  CompareArgs cmp_args;
  auto* compare_cmd = app.add_subcommand("compare", "Per-pixel error statistics as CSV");
  compare_cmd->add_option("a", cmp_args.a, "Encrypted-domain result (PGM/PBM or .csv raster)")
      ->required();
  compare_cmd->add_option("b", cmp_args.b, "Plaintext-domain result (PGM/PBM or .csv raster)")
      ->required();
  compare_cmd->add_option("--label", cmp_args.label, "Value of the op column");
  compare_cmd->add_option("--precision", cmp_args.precision, "Value of the precision column");
  compare_cmd->add_flag("--no-header", cmp_args.no_header);

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Timing harness (CSV on stdout)");
  bench_cmd->add_option("--bits", bench_args.bits, "Key sizes")
      ->delimiter(',')
      ->check(bits_check)
      ->capture_default_str();
  bench_cmd->add_flag("--with-1024", bench_args.with_1024, "Add 1024-bit keys");
  bench_cmd->add_option("--op", bench_args.ops, "Ops to time (default: all)")
      ->delimiter(',')
      ->check(CLI::IsMember({"negate", "brightness", "lpf", "sobel", "sharpen", "erosion",
                             "dilation", "equalization"}));
  bench_cmd->add_flag("--crypto", bench_args.crypto, "Time whole-image encrypt/decrypt");
  bench_cmd->add_option("--image", bench_args.image, "Grayscale input (default: synthetic 128x128)");
  bench_cmd->add_option("--binary", bench_args.binary, "Binary input for morphology");
  bench_cmd->add_option("--reps", bench_args.reps, "Repetitions per median")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  bench_cmd->add_option("--threads", bench_args.threads, "Worker threads")->capture_default_str();
  bench_cmd->add_option("--precision", bench_args.precision)->check(precision_check);
  bench_cmd->add_option("--format", bench_args.format, "long: one row per stage; wide: pre/server/post columns")
      ->check(CLI::IsMember({"long", "wide"}))
      ->capture_default_str();
  bench_cmd->add_option("--out", bench_args.out, "CSV file (default stdout)");
  bench_cmd->add_flag("--check", bench_args.check, "Exit 1 if a trend check fails");
  bench_cmd->add_option("--seed", bench_args.seed, "Deterministic seed");

  ServeArgs serve_args;
  auto* serve_cmd = app.add_subcommand("serve", "Run the operation server");
  serve_cmd->add_option("--listen", serve_args.listen,
                        std::string("host:port (default: $") + kAddressEnv +
                            ", else 127.0.0.1:7788; port 0 picks a free port)");
  serve_cmd->add_option("--port-file", serve_args.port_file, "Write the bound port here");
  serve_cmd->add_option("--threads", serve_args.threads, "Worker threads per request");
  serve_cmd->add_option("--max-payload", serve_args.max_payload, "Largest accepted payload (bytes)");
  serve_cmd->add_option("--seed", serve_args.seed, "Deterministic seed (testing only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*keygen_cmd) return cmd_keygen(keygen_args);
    if (*encrypt_cmd) return cmd_encrypt(enc_args);
    if (*decrypt_cmd) return cmd_decrypt(dec_args);
    if (*apply_cmd) return cmd_apply(apply_args);
    if (*reference_cmd) return cmd_reference(ref_args);
    if (*compare_cmd) return cmd_compare(cmp_args);
    if (*bench_cmd) return cmd_bench(bench_args);
    if (*serve_cmd) return cmd_serve(serve_args);
  } catch (const std::exception& e) {
    std::cerr << "cryptopix: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kUsage;
}
