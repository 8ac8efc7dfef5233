#include "cryptopix/paillier.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>

#include "cryptopix/errors.hpp"

namespace cryptopix {
namespace {

constexpr std::string_view kPublicKeyMagic = "CPXK";
constexpr std::uint8_t kPublicKeyVersion = 1;

Fingerprint fingerprint_of(const mpz_class& n) {
  Bytes encoded = to_bytes(n);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(encoded.data(), encoded.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  Fingerprint out{};
  std::copy_n(digest, out.size(), out.begin());
  return out;
}

void check_key(const PublicKey& pk, const RawCiphertext& c) {
  if (c.key != pk.fingerprint()) {
    throw KeyMismatchError("ciphertext was produced under key " + to_hex(c.key) +
                           ", expected " + to_hex(pk.fingerprint()));
  }
}

}  // namespace

std::string to_hex(const Fingerprint& fingerprint) {
  std::string out;
  out.reserve(fingerprint.size() * 2);
  char buf[3];
  for (auto b : fingerprint) {
    std::snprintf(buf, sizeof buf, "%02x", b);
    out += buf;
  }
  return out;
}

PublicKey::PublicKey(mpz_class n) : n_(std::move(n)) {
  if (n_ < 9 || mpz_even_p(n_.get_mpz_t())) {
    throw RangeError("Paillier modulus must be an odd integer >= 9");
  }
  n_squared_ = n_ * n_;
  g_ = n_ + 1;
  max_int_ = n_ / 3;
  fingerprint_ = fingerprint_of(n_);
}

unsigned PublicKey::bits() const {
  return static_cast<unsigned>(mpz_sizeinbase(n_.get_mpz_t(), 2));
}

Bytes PublicKey::serialize() const {
  ByteWriter out;
  out.raw(kPublicKeyMagic);
  out.u8(kPublicKeyVersion);
  out.u32(bits());
  out.bigint(n_);
  return std::move(out).take();
}

PublicKey PublicKey::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  in.expect_magic(kPublicKeyMagic, "public key");
  if (auto version = in.u8(); version != kPublicKeyVersion) {
    throw FormatError("public key: unsupported version " + std::to_string(version));
  }
  std::uint32_t bits = in.u32();
  PublicKey pk(in.bigint());
  in.expect_done("public key");
  if (pk.bits() != bits) {
    throw FormatError("public key: declared " + std::to_string(bits) + " bits, modulus has " +
                      std::to_string(pk.bits()));
  }
  return pk;
}

RawCiphertext encrypt_with_nonce(const PublicKey& pk, const mpz_class& m, const mpz_class& r) {
  if (sgn(m) < 0 || m >= pk.n()) {
    throw RangeError("plaintext outside [0, n)");
  }
  if (sgn(r) <= 0 || r >= pk.n()) {
    throw RangeError("blinding factor outside (0, n)");
  }
  // With g = n + 1, g^m = 1 + m*n (mod n^2).
  mpz_class gm = (1 + m * pk.n()) % pk.n_squared();
  mpz_class rn;
  mpz_powm(rn.get_mpz_t(), r.get_mpz_t(), pk.n().get_mpz_t(), pk.n_squared().get_mpz_t());
  return RawCiphertext{(gm * rn) % pk.n_squared(), pk.fingerprint()};
}

RawCiphertext encrypt_raw(const PublicKey& pk, const mpz_class& m, EntropySource& rng) {
  if (sgn(m) < 0 || m >= pk.n()) {
    throw RangeError("plaintext outside [0, n)");
  }
  mpz_class r;
  mpz_class g;
  do {
    r = rng.below(pk.n());
    mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), pk.n().get_mpz_t());
  } while (r == 0 || g != 1);
  return encrypt_with_nonce(pk, m, r);
}

RawCiphertext add_cipher(const PublicKey& pk, const RawCiphertext& a, const RawCiphertext& b) {
  check_key(pk, a);
  check_key(pk, b);
  return RawCiphertext{(a.value * b.value) % pk.n_squared(), pk.fingerprint()};
}

RawCiphertext scalar_mul(const PublicKey& pk, const RawCiphertext& a, const mpz_class& d) {
  check_key(pk, a);
  if (sgn(d) < 0 || d >= pk.n()) {
    throw RangeError("scalar outside [0, n)");
  }
  if (d == 1) {
    return a;
  }
  mpz_class out;
  mpz_powm(out.get_mpz_t(), a.value.get_mpz_t(), d.get_mpz_t(), pk.n_squared().get_mpz_t());
  return RawCiphertext{std::move(out), pk.fingerprint()};
}

RawCiphertext negate_cipher(const PublicKey& pk, const RawCiphertext& a) {
  check_key(pk, a);
  mpz_class out;
  if (mpz_invert(out.get_mpz_t(), a.value.get_mpz_t(), pk.n_squared().get_mpz_t()) == 0) {
    throw MalformedCiphertextError("ciphertext is not invertible modulo n^2");
  }
  return RawCiphertext{std::move(out), pk.fingerprint()};
}

void check_ciphertext(const PublicKey& pk, const RawCiphertext& c) {
  check_key(pk, c);
  if (sgn(c.value) <= 0 || c.value >= pk.n_squared()) {
    throw MalformedCiphertextError("ciphertext outside (0, n^2)");
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), c.value.get_mpz_t(), pk.n().get_mpz_t());
  if (g != 1) {
    throw MalformedCiphertextError("ciphertext shares a factor with n");
  }
}

}  // namespace cryptopix
