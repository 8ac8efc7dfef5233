#include "cryptopix/entropy.hpp"

#include <sys/random.h>

#include <cerrno>
#include <cstring>
#include <vector>

#include "cryptopix/bytes.hpp"
#include "cryptopix/errors.hpp"

namespace cryptopix {
namespace {

std::seed_seq make_seed_seq(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return std::seed_seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                       static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                       static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
}

}  // namespace

std::uint64_t EntropySource::next_u64() {
  std::uint8_t buf[8];
  fill(buf);
  std::uint64_t v = 0;
  for (auto b : buf) {
    v = (v << 8) | b;
  }
  return v;
}

mpz_class EntropySource::bits(unsigned bits) {
  if (bits == 0) {
    return 0;
  }
  std::vector<std::uint8_t> buf((bits + 7) / 8);
  fill(buf);
  unsigned excess = static_cast<unsigned>(buf.size() * 8 - bits);
  buf[0] &= static_cast<std::uint8_t>(0xFFu >> excess);
  return from_bytes(buf);
}

mpz_class EntropySource::below(const mpz_class& bound) {
  if (sgn(bound) <= 0) {
    throw RangeError("random bound must be positive");
  }
  const auto width = static_cast<unsigned>(mpz_sizeinbase(bound.get_mpz_t(), 2));
  for (;;) {
    mpz_class candidate = bits(width);
    if (candidate < bound) {
      return candidate;
    }
  }
}

void SystemEntropy::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    ssize_t got = ::getrandom(out.data() + done, out.size() - done, 0);
    if (got < 0) {
      if (errno == EINTR) {
        continue;
      }
      throw Error(std::string("getrandom failed: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(got);
  }
}

std::unique_ptr<EntropySource> SystemEntropy::substream(std::uint64_t, std::uint64_t) const {
  return std::make_unique<SystemEntropy>();
}

SeededEntropy::SeededEntropy(std::uint64_t seed) : seed_(seed) {
  auto seq = make_seed_seq(seed, 0, 0);
  engine_.seed(seq);
}

SeededEntropy::SeededEntropy(std::uint64_t seed, std::uint64_t nonce, std::uint64_t index)
    : seed_(seed) {
  // Mix the seed into the nonce slot so substreams never collide with the root stream.
  auto seq = make_seed_seq(seed, nonce ^ 0x9E3779B97F4A7C15ull, index + 1);
  engine_.seed(seq);
}

void SeededEntropy::fill(std::span<std::uint8_t> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t word = engine_();
    for (int k = 0; k < 8 && i < out.size(); ++k, ++i) {
      out[i] = static_cast<std::uint8_t>(word >> (8 * k));
    }
  }
}

std::unique_ptr<EntropySource> SeededEntropy::substream(std::uint64_t nonce,
                                                        std::uint64_t index) const {
  return std::unique_ptr<EntropySource>(new SeededEntropy(seed_, nonce, index));
}

std::unique_ptr<EntropySource> make_entropy(std::optional<std::uint64_t> seed) {
  if (seed) {
    return std::make_unique<SeededEntropy>(*seed);
  }
  return std::make_unique<SystemEntropy>();
}

}  // namespace cryptopix
