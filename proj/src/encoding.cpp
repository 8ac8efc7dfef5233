#include "cryptopix/encoding.hpp"

#include <cmath>
#include <limits>

#include "cryptopix/errors.hpp"

namespace cryptopix {
namespace {

mpz_class power(std::uint32_t base, unsigned exponent) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, exponent);
  return out;
}

void check_base(std::uint32_t base) {
  if (base < 2) {
    throw ParameterError("encoding base must be at least 2");
  }
}

void check_compatible(const PublicKey& pk, const EncryptedNumber& a, const EncryptedNumber& b) {
  if (a.key_fingerprint() != pk.fingerprint() || b.key_fingerprint() != pk.fingerprint()) {
    throw KeyMismatchError("encrypted operands were produced under different keys");
  }
  if (a.base != b.base) {
    throw ParameterError("encrypted operands use different encoding bases");
  }
}

/// Round-half-away-from-zero of an exact rational.
mpz_class round_half_away(const mpq_class& q) {
  mpz_class magnitude = abs(q.get_num());
  const mpz_class& den = q.get_den();
  mpz_class rounded = (2 * magnitude + den) / (2 * den);
  return sgn(q) < 0 ? mpz_class(-rounded) : rounded;
}

}  // namespace

int exponent_for_precision(double precision, std::uint32_t base) {
  check_base(base);
  if (!(precision > 0.0) || precision > 1.0 || !std::isfinite(precision)) {
    throw ParameterError("precision must lie in (0, 1]");
  }
  const mpq_class target(precision);
  int exponent = 0;
  mpz_class scale = 1;  // base^-exponent
  // base^exponent <= precision  <=>  1 <= precision * base^-exponent
  while (target * scale < 1) {
    scale *= base;
    --exponent;
  }
  return exponent;
}

Precision::Precision(double value, std::uint32_t base)
    : value_(value), base_(base), exponent_(exponent_for_precision(value, base)) {}

mpz_class fold(const PublicKey& pk, const mpz_class& value) {
  if (abs(value) > pk.max_int()) {
    throw EncodingOverflowError("value magnitude exceeds the signed third of Z_n");
  }
  return sgn(value) < 0 ? mpz_class(pk.n() + value) : value;
}

mpz_class unfold(const PublicKey& pk, const mpz_class& mantissa) {
  if (sgn(mantissa) < 0 || mantissa >= pk.n()) {
    throw RangeError("mantissa outside [0, n)");
  }
  if (mantissa <= pk.max_int()) {
    return mantissa;
  }
  if (mantissa >= pk.n() - pk.max_int()) {
    return mantissa - pk.n();
  }
  throw OverflowDetectedError("mantissa fell into the overflow zone of Z_n");
}

EncodedNumber encode_at(const PublicKey& pk, double x, int exponent, std::uint32_t base) {
  check_base(base);
  if (!std::isfinite(x)) {
    throw ParameterError("cannot encode a non-finite value");
  }
  if (exponent > 0) {
    throw ParameterError("encoding exponent must be non-positive");
  }
  mpq_class scaled(x);
  scaled *= power(base, static_cast<unsigned>(-exponent));
  return EncodedNumber{fold(pk, round_half_away(scaled)), exponent, base};
}

EncodedNumber encode(const PublicKey& pk, double x, const Precision& precision) {
  return encode_at(pk, x, precision.exponent(), precision.base());
}

EncodedNumber encode_integer(const PublicKey& pk, const mpz_class& value, int exponent,
                             std::uint32_t base) {
  check_base(base);
  if (exponent > 0) {
    throw ParameterError("encoding exponent must be non-positive");
  }
  mpz_class scaled = value * power(base, static_cast<unsigned>(-exponent));
  return EncodedNumber{fold(pk, scaled), exponent, base};
}

mpq_class decode_exact(const PublicKey& pk, const EncodedNumber& en) {
  mpq_class out(unfold(pk, en.mantissa), power(en.base, static_cast<unsigned>(-en.exponent)));
  out.canonicalize();
  return out;
}

double decode(const PublicKey& pk, const EncodedNumber& en) {
  return decode_exact(pk, en).get_d();
}

EncryptedNumber en_encrypt(const PublicKey& pk, const EncodedNumber& en, EntropySource& rng) {
  return EncryptedNumber{encrypt_raw(pk, en.mantissa, rng), en.exponent, en.base};
}

EncryptedNumber align(const PublicKey& pk, const EncryptedNumber& c, int target_exponent) {
  if (target_exponent > c.exponent) {
    throw AlignmentError("cannot raise exponent from " + std::to_string(c.exponent) + " to " +
                         std::to_string(target_exponent));
  }
  if (target_exponent == c.exponent) {
    return c;
  }
  mpz_class factor = power(c.base, static_cast<unsigned>(c.exponent - target_exponent));
  if (factor >= pk.n()) {
    throw AlignmentError("alignment factor base^" +
                         std::to_string(c.exponent - target_exponent) + " exceeds n");
  }
  return EncryptedNumber{scalar_mul(pk, c.ciphertext, factor), target_exponent, c.base};
}

EncryptedNumber en_add(const PublicKey& pk, const EncryptedNumber& a, const EncryptedNumber& b) {
  check_compatible(pk, a, b);
  if (a.exponent <= b.exponent) {
    EncryptedNumber scaled = align(pk, b, a.exponent);
    return EncryptedNumber{add_cipher(pk, a.ciphertext, scaled.ciphertext), a.exponent, a.base};
  }
  EncryptedNumber scaled = align(pk, a, b.exponent);
  return EncryptedNumber{add_cipher(pk, b.ciphertext, scaled.ciphertext), b.exponent, b.base};
}

EncryptedNumber en_scalar_mul(const PublicKey& pk, const EncryptedNumber& a,
                              const EncodedNumber& s) {
  if (a.key_fingerprint() != pk.fingerprint()) {
    throw KeyMismatchError("encrypted operand was produced under another key");
  }
  if (a.base != s.base) {
    throw ParameterError("scalar and ciphertext use different encoding bases");
  }
  const long exponent = static_cast<long>(a.exponent) + s.exponent;
  if (exponent < std::numeric_limits<std::int32_t>::min()) {
    throw RangeError("exponent underflow");
  }
  mpz_class value = unfold(pk, s.mantissa);
  RawCiphertext product = sgn(value) < 0
                              ? scalar_mul(pk, negate_cipher(pk, a.ciphertext), -value)
                              : scalar_mul(pk, a.ciphertext, value);
  return EncryptedNumber{std::move(product), static_cast<int>(exponent), a.base};
}

EncryptedNumber en_negate(const PublicKey& pk, const EncryptedNumber& a) {
  return EncryptedNumber{negate_cipher(pk, a.ciphertext), a.exponent, a.base};
}

EncryptedNumber en_sub(const PublicKey& pk, const EncryptedNumber& a, const EncryptedNumber& b) {
  check_compatible(pk, a, b);
  return en_add(pk, a, en_negate(pk, b));
}

std::size_t ciphertext_width(const PublicKey& pk) { return byte_length(pk.n_squared()); }

void write_number(ByteWriter& out, const EncryptedNumber& number) {
  Bytes bytes = to_bytes(number.ciphertext.value);
  out.i32(number.exponent);
  out.u32(static_cast<std::uint32_t>(bytes.size()));
  out.raw(bytes);
}

EncryptedNumber read_number(ByteReader& in, const Fingerprint& key, std::uint32_t base) {
  std::int32_t exponent = in.i32();
  std::uint32_t length = in.u32();
  mpz_class value = from_bytes(in.raw(length));
  if (exponent > 0) {
    throw FormatError("encrypted number with positive exponent");
  }
  return EncryptedNumber{RawCiphertext{std::move(value), key}, exponent, base};
}

}  // namespace cryptopix
