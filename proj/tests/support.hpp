#pragma once

#include <cstdint>
#include <map>
#include <random>

#include "cryptopix/entropy.hpp"
#include "cryptopix/image.hpp"
#include "cryptopix/paillier_private.hpp"

namespace testing {

/// One seeded keypair per size, generated on first use and shared by every test.
inline const cryptopix::Keypair& keys(unsigned bits) {
  static std::map<unsigned, cryptopix::Keypair> cache;
  auto it = cache.find(bits);
  if (it == cache.end()) {
    cryptopix::SeededEntropy rng(1000 + bits);
    it = cache.emplace(bits, cryptopix::keygen(bits, rng)).first;
  }
  return it->second;
}

inline const cryptopix::PublicKey& pk(unsigned bits = 256) { return keys(bits).public_key; }
inline const cryptopix::PrivateKey& sk(unsigned bits = 256) { return keys(bits).private_key; }

inline cryptopix::PlainImage random_image(std::uint32_t w, std::uint32_t h, std::uint32_t levels,
                                          std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::int32_t> dist(0, static_cast<std::int32_t>(levels) - 1);
  cryptopix::PlainImage img = cryptopix::PlainImage::filled(w, h, 0, levels);
  for (auto& p : img.pixels) {
    p = dist(gen);
  }
  return img;
}

inline cryptopix::PlainImage random_binary(std::uint32_t w, std::uint32_t h, double density,
                                           std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution on(density);
  cryptopix::PlainImage img = cryptopix::PlainImage::filled(w, h, 0, 2);
  for (auto& p : img.pixels) {
    p = on(gen) ? 1 : 0;
  }
  return img;
}

/// Reflect-101 index (…, 2, 1 | 0, 1, 2, … n-1 | n-2, …).
inline long reflect101(long i, long n) {
  if (n == 1) {
    return 0;
  }
  while (i < 0 || i >= n) {
    i = i < 0 ? -i : 2 * (n - 1) - i;
  }
  return i;
}

}  // namespace testing
