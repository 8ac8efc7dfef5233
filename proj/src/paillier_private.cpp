#include "cryptopix/paillier_private.hpp"

#include <algorithm>

#include "cryptopix/errors.hpp"

namespace cryptopix {
namespace {

constexpr std::string_view kPrivateKeyMagic = "CPXS";
constexpr std::uint8_t kPrivateKeyVersion = 1;

constexpr std::array<unsigned, 54> kSmallPrimes{
    2,   3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,  41,  43,  47,  53,  59,  61,
    67,  71,  73,  79,  83,  89,  97,  101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151,
    157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251};

mpz_class random_prime(unsigned bits, EntropySource& rng) {
  for (;;) {
    mpz_class candidate = rng.bits(bits);
    // Top two bits set so the product of two such primes has exactly 2*bits bits.
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), bits - 2);
    mpz_setbit(candidate.get_mpz_t(), 0);
    if (is_probable_prime(candidate, kPrimalityRounds, rng)) {
      return candidate;
    }
  }
}

}  // namespace

bool is_probable_prime(const mpz_class& candidate, int rounds, EntropySource& rng) {
  if (candidate < 2) {
    return false;
  }
  for (unsigned p : kSmallPrimes) {
    if (candidate == p) {
      return true;
    }
    if (mpz_divisible_ui_p(candidate.get_mpz_t(), p) != 0) {
      return false;
    }
  }

  const mpz_class minus_one = candidate - 1;
  mpz_class d = minus_one;
  unsigned s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d >>= 1;
    ++s;
  }

  const mpz_class base_range = candidate - 3;  // bases in [2, candidate - 2]
  mpz_class x;
  for (int round = 0; round < rounds; ++round) {
    mpz_class a = rng.below(base_range) + 2;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), candidate.get_mpz_t());
    if (x == 1 || x == minus_one) {
      continue;
    }
    bool witness = true;
    for (unsigned r = 1; r < s; ++r) {
      mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, candidate.get_mpz_t());
      if (x == minus_one) {
        witness = false;
        break;
      }
    }
    if (witness) {
      return false;
    }
  }
  return true;
}

PrivateKey::PrivateKey(PublicKey pk, mpz_class p, mpz_class q)
    : pk_(std::move(pk)), p_(std::move(p)), q_(std::move(q)) {
  if (p_ == q_) {
    throw RangeError("private key primes must differ");
  }
  if (p_ * q_ != pk_.n()) {
    throw RangeError("private key primes do not multiply to n");
  }
  p_squared_ = p_ * p_;
  q_squared_ = q_ * q_;

  // h_p = L_p(g^(p-1) mod p^2)^-1 mod p, with L_p(x) = (x - 1) / p.
  auto precompute = [this](const mpz_class& prime, const mpz_class& prime_sq) {
    mpz_class gp;
    mpz_class exponent = prime - 1;
    mpz_powm(gp.get_mpz_t(), pk_.g().get_mpz_t(), exponent.get_mpz_t(), prime_sq.get_mpz_t());
    mpz_class l = (gp - 1) / prime;
    mpz_class h;
    if (mpz_invert(h.get_mpz_t(), l.get_mpz_t(), prime.get_mpz_t()) == 0) {
      throw RangeError("degenerate private key");
    }
    return h;
  };
  hp_ = precompute(p_, p_squared_);
  hq_ = precompute(q_, q_squared_);
  if (mpz_invert(q_inverse_.get_mpz_t(), q_.get_mpz_t(), p_.get_mpz_t()) == 0) {
    throw RangeError("private key primes are not coprime");
  }
}

mpz_class PrivateKey::decrypt_half(const mpz_class& c, const mpz_class& prime,
                                   const mpz_class& prime_sq, const mpz_class& h) const {
  mpz_class x;
  mpz_class exponent = prime - 1;
  mpz_class base = c % prime_sq;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), prime_sq.get_mpz_t());
  mpz_class l = (x - 1) / prime;
  return (l * h) % prime;
}

mpz_class PrivateKey::decrypt(const mpz_class& c) const {
  mpz_class mp = decrypt_half(c, p_, p_squared_, hp_);
  mpz_class mq = decrypt_half(c, q_, q_squared_, hq_);
  // Garner recombination: m = mq + q * ((mp - mq) * q^-1 mod p).
  mpz_class u = ((mp - mq) * q_inverse_) % p_;
  if (sgn(u) < 0) {
    u += p_;
  }
  return mq + u * q_;
}

Bytes PrivateKey::serialize() const {
  ByteWriter out;
  out.raw(kPrivateKeyMagic);
  out.u8(kPrivateKeyVersion);
  out.u32(pk_.bits());
  out.bigint(p_);
  out.bigint(q_);
  return std::move(out).take();
}

PrivateKey PrivateKey::deserialize(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  in.expect_magic(kPrivateKeyMagic, "private key");
  if (auto version = in.u8(); version != kPrivateKeyVersion) {
    throw FormatError("private key: unsupported version " + std::to_string(version));
  }
  std::uint32_t bits = in.u32();
  mpz_class p = in.bigint();
  mpz_class q = in.bigint();
  in.expect_done("private key");
  PublicKey pk(p * q);
  if (pk.bits() != bits) {
    throw FormatError("private key: declared bit length does not match modulus");
  }
  return PrivateKey(std::move(pk), std::move(p), std::move(q));
}

Keypair keygen(unsigned bits, EntropySource& rng) {
  if (std::find(kSupportedKeyBits.begin(), kSupportedKeyBits.end(), bits) ==
      kSupportedKeyBits.end()) {
    throw RangeError("unsupported key size " + std::to_string(bits) +
                     " (expected 256, 512, 1024, 2048 or 3072)");
  }
  const unsigned half = bits / 2;
  for (;;) {
    mpz_class p = random_prime(half, rng);
    mpz_class q = random_prime(half, rng);
    if (p == q) {
      continue;
    }
    mpz_class n = p * q;
    mpz_class phi = (p - 1) * (q - 1);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), phi.get_mpz_t());
    if (g != 1 || mpz_sizeinbase(n.get_mpz_t(), 2) != bits) {
      continue;
    }
    if (p < q) {
      std::swap(p, q);
    }
    PublicKey pk(n);
    PrivateKey sk(pk, std::move(p), std::move(q));
    return Keypair{std::move(pk), std::move(sk)};
  }
}

mpz_class decrypt_raw(const PrivateKey& sk, const RawCiphertext& c) {
  check_ciphertext(sk.public_key(), c);
  return sk.decrypt(c.value);
}

}  // namespace cryptopix
