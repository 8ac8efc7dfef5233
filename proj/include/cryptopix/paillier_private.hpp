#pragma once

#include <array>
#include <cstdint>
#include <span>

#include <gmpxx.h>

#include "cryptopix/bytes.hpp"
#include "cryptopix/entropy.hpp"
#include "cryptopix/paillier.hpp"

namespace cryptopix {

inline constexpr std::array<unsigned, 5> kSupportedKeyBits{256, 512, 1024, 2048, 3072};

/// Miller-Rabin rounds used for prime generation.
inline constexpr int kPrimalityRounds = 64;

/// Factorization of n plus the constants needed for CRT decryption.
///
/// Deliberately not convertible to PublicKey: server-side code only ever sees
/// the public half.
class PrivateKey {
 public:
  PrivateKey(PublicKey pk, mpz_class p, mpz_class q);

  const PublicKey& public_key() const { return pk_; }
  const mpz_class& p() const { return p_; }
  const mpz_class& q() const { return q_; }

  /// Raw decryption of a value already known to be a unit of Z_{n^2}.
  mpz_class decrypt(const mpz_class& c) const;

  /// `CPXS` | version u8 | bit length u32 | p | q (each u32 length-prefixed).
  Bytes serialize() const;
  static PrivateKey deserialize(std::span<const std::uint8_t> bytes);

 private:
  mpz_class decrypt_half(const mpz_class& c, const mpz_class& prime, const mpz_class& prime_sq,
                         const mpz_class& h) const;

  PublicKey pk_;
  mpz_class p_;
  mpz_class q_;
  mpz_class p_squared_;
  mpz_class q_squared_;
  mpz_class hp_;
  mpz_class hq_;
  mpz_class q_inverse_;  // q^-1 mod p
};

struct Keypair {
  PublicKey public_key;
  PrivateKey private_key;
};

/// Generates n = p*q with exactly `bits` bits from two equal-length primes.
/// Deterministic for a SeededEntropy. Throws RangeError for unsupported sizes.
Keypair keygen(unsigned bits, EntropySource& rng);

/// Throws MalformedCiphertextError when gcd(c, n^2) != 1 and KeyMismatchError
/// when the ciphertext carries another key's fingerprint.
mpz_class decrypt_raw(const PrivateKey& sk, const RawCiphertext& c);

/// Miller-Rabin with `rounds` random bases drawn from `rng`, preceded by trial division.
bool is_probable_prime(const mpz_class& candidate, int rounds, EntropySource& rng);

}  // namespace cryptopix
