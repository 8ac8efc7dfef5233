#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>

#include <gmpxx.h>

namespace cryptopix {

/// Source of random bytes for key generation and encryption.
///
/// Instances are not required to be thread-safe. Parallel code asks for an
/// independent `substream` per work item instead of sharing one source.
class EntropySource {
 public:
  virtual ~EntropySource() = default;

  virtual void fill(std::span<std::uint8_t> out) = 0;

  /// Independent source identified by (nonce, index). For seeded sources the
  /// result depends only on the seed and the pair, so parallel work produces
  /// the same bytes regardless of scheduling.
  virtual std::unique_ptr<EntropySource> substream(std::uint64_t nonce,
                                                   std::uint64_t index) const = 0;

  std::uint64_t next_u64();
  /// Uniform integer in [0, bound) by rejection sampling. `bound` must be positive.
  mpz_class below(const mpz_class& bound);
  /// Uniform integer with at most `bits` bits.
  mpz_class bits(unsigned bits);
};

/// Operating-system randomness (getrandom). Safe to share between threads.
class SystemEntropy final : public EntropySource {
 public:
  void fill(std::span<std::uint8_t> out) override;
  std::unique_ptr<EntropySource> substream(std::uint64_t nonce,
                                           std::uint64_t index) const override;
};

/// Deterministic source for reproducible tests. Not cryptographically secure.
class SeededEntropy final : public EntropySource {
 public:
  explicit SeededEntropy(std::uint64_t seed);

  void fill(std::span<std::uint8_t> out) override;
  std::unique_ptr<EntropySource> substream(std::uint64_t nonce,
                                           std::uint64_t index) const override;

 private:
  SeededEntropy(std::uint64_t seed, std::uint64_t nonce, std::uint64_t index);

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// Seeded source when a seed is given, OS randomness otherwise.
std::unique_ptr<EntropySource> make_entropy(std::optional<std::uint64_t> seed);

}  // namespace cryptopix
