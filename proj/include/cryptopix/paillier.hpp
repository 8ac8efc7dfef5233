#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include <gmpxx.h>

#include "cryptopix/bytes.hpp"
#include "cryptopix/entropy.hpp"
#include "cryptopix/errors.hpp"

namespace cryptopix {

/// First 128 bits of SHA-256 over the big-endian bytes of n.
using Fingerprint = std::array<std::uint8_t, 16>;

std::string to_hex(const Fingerprint& fingerprint);

/// Paillier public key with generator g = n + 1.
///
/// The ring Z_n is split into thirds for signed values: [0, max_int] holds
/// non-negative values, [n - max_int, n) holds negative ones and everything in
/// between marks an overflow.
class PublicKey {
 public:
  explicit PublicKey(mpz_class n);

  const mpz_class& n() const { return n_; }
  const mpz_class& n_squared() const { return n_squared_; }
  const mpz_class& g() const { return g_; }
  const mpz_class& max_int() const { return max_int_; }
  unsigned bits() const;
  const Fingerprint& fingerprint() const { return fingerprint_; }

  /// `CPXK` | version u8 | bit length u32 | n (u32 length-prefixed big-endian).
  Bytes serialize() const;
  static PublicKey deserialize(std::span<const std::uint8_t> bytes);

  friend bool operator==(const PublicKey& a, const PublicKey& b) { return a.n_ == b.n_; }

 private:
  mpz_class n_;
  mpz_class n_squared_;
  mpz_class g_;
  mpz_class max_int_;
  Fingerprint fingerprint_{};
};

/// Ciphertext in Z_{n^2}, tagged with the fingerprint of the key that produced it.
struct RawCiphertext {
  mpz_class value;
  Fingerprint key{};
};

/// g^m * r^n mod n^2 with fresh r in Z_n^*. Requires 0 <= m < n.
RawCiphertext encrypt_raw(const PublicKey& pk, const mpz_class& m, EntropySource& rng);

/// Encryption with a caller-chosen blinding factor r; used by tests and by encrypt_raw.
RawCiphertext encrypt_with_nonce(const PublicKey& pk, const mpz_class& m, const mpz_class& r);

/// a * b mod n^2, decrypting to (m_a + m_b) mod n.
RawCiphertext add_cipher(const PublicKey& pk, const RawCiphertext& a, const RawCiphertext& b);

/// a^d mod n^2, decrypting to (m_a * d) mod n. Requires 0 <= d < n.
RawCiphertext scalar_mul(const PublicKey& pk, const RawCiphertext& a, const mpz_class& d);

/// a^-1 mod n^2, decrypting to (-m_a) mod n. Same result as scalar_mul(a, n - 1)
/// after decryption, without the full-width exponentiation.
RawCiphertext negate_cipher(const PublicKey& pk, const RawCiphertext& a);

/// Throws KeyMismatchError or MalformedCiphertextError unless `c` is a unit of
/// Z_{n^2} produced under `pk`.
void check_ciphertext(const PublicKey& pk, const RawCiphertext& c);

}  // namespace cryptopix
