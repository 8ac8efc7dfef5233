#include <doctest.h>

#include <type_traits>

#include "cryptopix/paillier.hpp"
#include "cryptopix/paillier_private.hpp"
#include "support.hpp"

using namespace cryptopix;

static_assert(!std::is_convertible_v<PrivateKey, PublicKey>);
static_assert(!std::is_convertible_v<const PrivateKey&, const PublicKey&>);
static_assert(!std::is_base_of_v<PublicKey, PrivateKey>);

namespace {

// Textbook decryption with lambda = lcm(p-1, q-1) and mu = L(g^lambda)^-1; shares
// nothing with the CRT path under test.
mpz_class textbook_decrypt(const PrivateKey& sk, const mpz_class& c) {
  const mpz_class& n = sk.public_key().n();
  const mpz_class n2 = n * n;
  mpz_class lambda;
  mpz_class pm1 = sk.p() - 1;
  mpz_class qm1 = sk.q() - 1;
  mpz_lcm(lambda.get_mpz_t(), pm1.get_mpz_t(), qm1.get_mpz_t());
  auto L = [&](const mpz_class& x) -> mpz_class { return (x - 1) / n; };
  mpz_class g_lambda;
  mpz_class g = n + 1;
  mpz_powm(g_lambda.get_mpz_t(), g.get_mpz_t(), lambda.get_mpz_t(), n2.get_mpz_t());
  mpz_class mu;
  mpz_class lg = L(g_lambda);
  REQUIRE(mpz_invert(mu.get_mpz_t(), lg.get_mpz_t(), n.get_mpz_t()) != 0);
  mpz_class c_lambda;
  mpz_powm(c_lambda.get_mpz_t(), c.get_mpz_t(), lambda.get_mpz_t(), n2.get_mpz_t());
  mpz_class m = (L(c_lambda) * mu) % n;
  return m;
}

mpz_class powm(const mpz_class& b, const mpz_class& e, const mpz_class& m) {
  mpz_class r;
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

void round_trips(unsigned bits, int samples) {
  const auto& pk = testing::pk(bits);
  const auto& sk = testing::sk(bits);
  SeededEntropy rng(bits * 7 + 1);
  for (int i = 0; i < samples; ++i) {
    const mpz_class m = rng.below(pk.n());
    const RawCiphertext c = encrypt_raw(pk, m, rng);
    REQUIRE(decrypt_raw(sk, c) == m);
  }
}

}  // namespace

TEST_SUITE("paillier") {
  TEST_CASE("keygen is deterministic under a fixed seed") {
    SeededEntropy a(42);
    SeededEntropy b(42);
    Keypair ka = keygen(256, a);
    Keypair kb = keygen(256, b);
    CHECK(ka.public_key == kb.public_key);
    CHECK(ka.private_key.p() == kb.private_key.p());
    CHECK(ka.private_key.q() == kb.private_key.q());
    SeededEntropy c(43);
    CHECK_FALSE(keygen(256, c).public_key == ka.public_key);
  }

  TEST_CASE("keygen produces well-formed keys") {
    for (unsigned bits : {256u, 512u, 1024u}) {
      const auto& kp = testing::keys(bits);
      const mpz_class& n = kp.public_key.n();
      CAPTURE(bits);
      CHECK(mpz_sizeinbase(n.get_mpz_t(), 2) == bits);
      CHECK(kp.public_key.bits() == bits);
      CHECK(kp.private_key.p() * kp.private_key.q() == n);
      CHECK(kp.private_key.p() != kp.private_key.q());
      CHECK(mpz_sizeinbase(kp.private_key.p().get_mpz_t(), 2) == bits / 2);
      CHECK(mpz_sizeinbase(kp.private_key.q().get_mpz_t(), 2) == bits / 2);
      CHECK(mpz_probab_prime_p(kp.private_key.p().get_mpz_t(), 40) > 0);
      CHECK(mpz_probab_prime_p(kp.private_key.q().get_mpz_t(), 40) > 0);
      CHECK(kp.public_key.n_squared() == n * n);
      CHECK(kp.public_key.g() == n + 1);
      const mpz_class& mx = kp.public_key.max_int();
      CHECK(3 * mx <= n);
      CHECK(n < 3 * (mx + 1));
    }
  }

  TEST_CASE("keygen rejects unsupported sizes") {
    SeededEntropy rng(1);
    for (unsigned bits : {0u, 128u, 255u, 1000u, 4096u}) {
      CHECK_THROWS_AS(keygen(bits, rng), RangeError);
    }
  }

  TEST_CASE("public key validation") {
    CHECK_THROWS_AS(PublicKey(mpz_class(10)), RangeError);
    CHECK_THROWS_AS(PublicKey(mpz_class(7)), RangeError);
  }

  TEST_CASE("private key rejects inconsistent factors") {
    const auto& kp = testing::keys(256);
    CHECK_THROWS(PrivateKey(kp.public_key, kp.private_key.p(), kp.private_key.p()));
    CHECK_THROWS(PrivateKey(kp.public_key, kp.private_key.p() + 2, kp.private_key.q()));
  }

  TEST_CASE("round trip at 256 bits, 1000 residues") { round_trips(256, 1000); }
  TEST_CASE("round trip at 512 bits, 1000 residues") { round_trips(512, 1000); }
  TEST_CASE("round trip at 1024 bits, 1000 residues") { round_trips(1024, 1000); }

  TEST_CASE("round trip at 2048 bits") {
    SeededEntropy rng(2048);
    Keypair kp = keygen(2048, rng);
    CHECK(mpz_sizeinbase(kp.public_key.n().get_mpz_t(), 2) == 2048);
    for (int i = 0; i < 50; ++i) {
      const mpz_class m = rng.below(kp.public_key.n());
      REQUIRE(decrypt_raw(kp.private_key, encrypt_raw(kp.public_key, m, rng)) == m);
    }
  }

  TEST_CASE("CRT decryption agrees with textbook decryption") {
    for (unsigned bits : {256u, 512u}) {
      const auto& pk = testing::pk(bits);
      const auto& sk = testing::sk(bits);
      SeededEntropy rng(99);
      for (int i = 0; i < 200; ++i) {
        mpz_class c;
        do {
          c = rng.below(pk.n_squared());
        } while (gcd(c, pk.n()) != 1);
        REQUIRE(decrypt_raw(sk, RawCiphertext{c, pk.fingerprint()}) == textbook_decrypt(sk, c));
      }
    }
  }

  TEST_CASE("encryption matches the generic g^m r^n formula") {
    const auto& pk = testing::pk(256);
    SeededEntropy rng(5);
    for (int i = 0; i < 200; ++i) {
      const mpz_class m = rng.below(pk.n());
      mpz_class r;
      do {
        r = rng.below(pk.n());
      } while (r == 0 || gcd(r, pk.n()) != 1);
      const mpz_class expected =
          (powm(pk.n() + 1, m, pk.n_squared()) * powm(r, pk.n(), pk.n_squared())) %
          pk.n_squared();
      REQUIRE(encrypt_with_nonce(pk, m, r).value == expected);
    }
  }

  TEST_CASE("boundary plaintexts") {
    const auto& pk = testing::pk(256);
    const auto& sk = testing::sk(256);
    SeededEntropy rng(6);
    CHECK(decrypt_raw(sk, encrypt_raw(pk, 0, rng)) == 0);
    CHECK(decrypt_raw(sk, encrypt_raw(pk, pk.n() - 1, rng)) == pk.n() - 1);
    CHECK_THROWS_AS(encrypt_raw(pk, pk.n(), rng), RangeError);
    CHECK_THROWS_AS(encrypt_raw(pk, -1, rng), RangeError);
  }

  TEST_CASE("encryption is probabilistic") {
    const auto& pk = testing::pk(256);
    const auto& sk = testing::sk(256);
    SeededEntropy rng(7);
    for (int i = 0; i < 100; ++i) {
      const mpz_class m = rng.below(pk.n());
      const RawCiphertext a = encrypt_raw(pk, m, rng);
      const RawCiphertext b = encrypt_raw(pk, m, rng);
      REQUIRE(a.value != b.value);
      REQUIRE(decrypt_raw(sk, a) == decrypt_raw(sk, b));
    }
  }

  TEST_CASE("additive homomorphism") {
    const auto& pk = testing::pk(256);
    const auto& sk = testing::sk(256);
    SeededEntropy rng(8);
    CHECK(decrypt_raw(sk, add_cipher(pk, encrypt_raw(pk, 3, rng), encrypt_raw(pk, 5, rng))) == 8);
    CHECK(decrypt_raw(sk, add_cipher(pk, encrypt_raw(pk, pk.n() - 1, rng),
                                     encrypt_raw(pk, 2, rng))) == 1);
    for (int i = 0; i < 500; ++i) {
      const mpz_class a = rng.below(pk.n());
      const mpz_class b = rng.below(pk.n());
      const RawCiphertext sum = add_cipher(pk, encrypt_raw(pk, a, rng), encrypt_raw(pk, b, rng));
      REQUIRE(decrypt_raw(sk, sum) == (a + b) % pk.n());
    }
  }

  TEST_CASE("self-blinding scalar multiplication") {
    const auto& pk = testing::pk(256);
    const auto& sk = testing::sk(256);
    SeededEntropy rng(9);
    const RawCiphertext seven = encrypt_raw(pk, 7, rng);
    CHECK(decrypt_raw(sk, scalar_mul(pk, seven, 1)) == 7);
    CHECK(scalar_mul(pk, seven, 1).value == seven.value);
    CHECK(decrypt_raw(sk, scalar_mul(pk, seven, 0)) == 0);
    CHECK_THROWS_AS(scalar_mul(pk, seven, pk.n()), RangeError);
    CHECK_THROWS_AS(scalar_mul(pk, seven, -1), RangeError);
    for (int i = 0; i < 500; ++i) {
      const mpz_class m = rng.below(pk.n());
      const mpz_class d = rng.below(pk.n());
      REQUIRE(decrypt_raw(sk, scalar_mul(pk, encrypt_raw(pk, m, rng), d)) == (m * d) % pk.n());
    }
  }

  TEST_CASE("ciphertext inverse negates the plaintext") {
    const auto& pk = testing::pk(256);
    const auto& sk = testing::sk(256);
    SeededEntropy rng(10);
    for (int i = 0; i < 100; ++i) {
      const mpz_class m = rng.below(pk.n());
      const RawCiphertext c = encrypt_raw(pk, m, rng);
      REQUIRE(decrypt_raw(sk, negate_cipher(pk, c)) == (pk.n() - m) % pk.n());
      REQUIRE(decrypt_raw(sk, negate_cipher(pk, c)) ==
              decrypt_raw(sk, scalar_mul(pk, c, pk.n() - 1)));
    }
  }

  TEST_CASE("malformed and foreign ciphertexts are rejected") {
    const auto& pk = testing::pk(256);
    const auto& sk = testing::sk(256);
    CHECK_THROWS_AS(decrypt_raw(sk, RawCiphertext{sk.p(), pk.fingerprint()}),
                    MalformedCiphertextError);
    CHECK_THROWS_AS(decrypt_raw(sk, RawCiphertext{0, pk.fingerprint()}), MalformedCiphertextError);
    CHECK_THROWS_AS(decrypt_raw(sk, RawCiphertext{pk.n_squared(), pk.fingerprint()}),
                    MalformedCiphertextError);

    SeededEntropy rng(11);
    const RawCiphertext other = encrypt_raw(testing::pk(512), 1, rng);
    CHECK_THROWS_AS(decrypt_raw(sk, other), KeyMismatchError);
    CHECK_THROWS_AS(add_cipher(pk, encrypt_raw(pk, 1, rng), other), KeyMismatchError);
  }

  TEST_CASE("ciphertexts occupy 2k bits") {
    for (unsigned bits : {256u, 512u, 1024u}) {
      const auto& pk = testing::pk(bits);
      SeededEntropy rng(12);
      CHECK(mpz_sizeinbase(pk.n_squared().get_mpz_t(), 2) <= 2 * bits);
      const RawCiphertext c = encrypt_raw(pk, 1, rng);
      CHECK(to_bytes(c.value, 2 * bits / 8).size() * 8 == 2 * bits);
    }
  }

  TEST_CASE("key files round trip and reject corruption") {
    const auto& kp = testing::keys(256);
    Bytes pub = kp.public_key.serialize();
    CHECK(std::string(pub.begin(), pub.begin() + 4) == "CPXK");
    CHECK(PublicKey::deserialize(pub) == kp.public_key);
    Bytes sec = kp.private_key.serialize();
    PrivateKey back = PrivateKey::deserialize(sec);
    CHECK(back.p() == kp.private_key.p());
    CHECK(back.public_key() == kp.public_key);

    Bytes bad = pub;
    bad[0] = 'X';
    CHECK_THROWS_AS(PublicKey::deserialize(bad), FormatError);
    bad = pub;
    bad[4] = 9;
    CHECK_THROWS_AS(PublicKey::deserialize(bad), FormatError);
    CHECK_THROWS_AS(PublicKey::deserialize(std::span(pub).first(pub.size() - 1)), FormatError);
    CHECK_THROWS_AS(PrivateKey::deserialize(pub), FormatError);
  }

  TEST_CASE("fingerprints identify keys") {
    CHECK(testing::pk(256).fingerprint() == PublicKey(testing::pk(256).n()).fingerprint());
    CHECK(testing::pk(256).fingerprint() != testing::pk(512).fingerprint());
    CHECK(to_hex(testing::pk(256).fingerprint()).size() == 32);
  }

  TEST_CASE("primality test agrees with GMP") {
    SeededEntropy rng(13);
    for (unsigned long v = 0; v < 5000; ++v) {
      const mpz_class c(v);
      REQUIRE(is_probable_prime(c, 20, rng) == (mpz_probab_prime_p(c.get_mpz_t(), 30) > 0));
    }
    mpz_class mersenne = (mpz_class(1) << 127) - 1;
    CHECK(is_probable_prime(mersenne, kPrimalityRounds, rng));
    CHECK_FALSE(is_probable_prime((mpz_class(1) << 128) + 1, kPrimalityRounds, rng));
    for (unsigned long carmichael : {561ul, 1105ul, 1729ul, 2465ul, 2821ul, 6601ul, 8911ul}) {
      CHECK_FALSE(is_probable_prime(mpz_class(carmichael), kPrimalityRounds, rng));
    }
  }
}
