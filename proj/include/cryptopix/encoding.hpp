#pragma once

#include <cstddef>
#include <cstdint>

#include <gmpxx.h>

#include "cryptopix/bytes.hpp"
#include "cryptopix/entropy.hpp"
#include "cryptopix/paillier.hpp"

namespace cryptopix {

inline constexpr std::uint32_t kDefaultBase = 16;
inline constexpr double kDefaultPrecision = 1e-8;

/// floor(log_base(precision)), computed exactly: the largest e <= 0 with base^e <= precision.
int exponent_for_precision(double precision, std::uint32_t base);

/// Requested encoding precision together with the radix and the exponent it implies.
class Precision {
 public:
  explicit Precision(double value = kDefaultPrecision, std::uint32_t base = kDefaultBase);

  double value() const { return value_; }
  std::uint32_t base() const { return base_; }
  int exponent() const { return exponent_; }

 private:
  double value_;
  std::uint32_t base_;
  int exponent_;
};

/// Plaintext value mantissa * base^exponent with the signed mantissa folded into Z_n.
struct EncodedNumber {
  mpz_class mantissa;
  int exponent = 0;
  std::uint32_t base = kDefaultBase;
};

/// Ciphertext of a mantissa paired with its plaintext exponent.
struct EncryptedNumber {
  RawCiphertext ciphertext;
  int exponent = 0;
  std::uint32_t base = kDefaultBase;

  const Fingerprint& key_fingerprint() const { return ciphertext.key; }
};

/// Signed integer -> ring element (negatives map to n - |v|). Throws EncodingOverflowError
/// when |v| > max_int.
mpz_class fold(const PublicKey& pk, const mpz_class& value);
/// Ring element -> signed integer. Throws OverflowDetectedError in the middle zone.
mpz_class unfold(const PublicKey& pk, const mpz_class& mantissa);

/// Round-half-away-from-zero of x / base^exponent, folded. Exponent must be <= 0.
EncodedNumber encode_at(const PublicKey& pk, double x, int exponent, std::uint32_t base);
EncodedNumber encode(const PublicKey& pk, double x, const Precision& precision);
/// Exact encoding of an integer with the given exponent (value * base^-exponent).
EncodedNumber encode_integer(const PublicKey& pk, const mpz_class& value, int exponent,
                             std::uint32_t base);

/// Exact rational value; throws OverflowDetectedError in the middle zone.
mpq_class decode_exact(const PublicKey& pk, const EncodedNumber& en);
double decode(const PublicKey& pk, const EncodedNumber& en);

EncryptedNumber en_encrypt(const PublicKey& pk, const EncodedNumber& en, EntropySource& rng);

/// Lowers the exponent to `target_exponent` by scaling the mantissa with
/// base^(exponent - target). Raising the exponent would need a division and is
/// rejected with AlignmentError.
EncryptedNumber align(const PublicKey& pk, const EncryptedNumber& c, int target_exponent);

/// Encrypted sum; result exponent is min(a.exponent, b.exponent).
EncryptedNumber en_add(const PublicKey& pk, const EncryptedNumber& a, const EncryptedNumber& b);

/// Product with a plaintext scalar; exponents add. Negative scalars are applied
/// to the ciphertext inverse with |s| so the exponentiation stays short.
EncryptedNumber en_scalar_mul(const PublicKey& pk, const EncryptedNumber& a,
                              const EncodedNumber& s);

/// a + (-1) * b.
EncryptedNumber en_sub(const PublicKey& pk, const EncryptedNumber& a, const EncryptedNumber& b);

/// (-1) * a, exponent unchanged.
EncryptedNumber en_negate(const PublicKey& pk, const EncryptedNumber& a);

/// Number of bytes a ciphertext occupies when padded to the width of n^2.
std::size_t ciphertext_width(const PublicKey& pk);

/// exponent i32 | ciphertext length u32 | ciphertext bytes (big-endian).
void write_number(ByteWriter& out, const EncryptedNumber& number);
/// Reads the form written by write_number; base and key come from the enclosing container.
EncryptedNumber read_number(ByteReader& in, const Fingerprint& key, std::uint32_t base);

}  // namespace cryptopix
