#include "cryptopix/decryption.hpp"

#include "cryptopix/errors.hpp"
#include "cryptopix/parallel.hpp"

namespace cryptopix {
namespace {

void check_key(const PrivateKey& sk, const Fingerprint& key) {
  if (key != sk.public_key().fingerprint()) {
    throw KeyMismatchError("data was encrypted under key " + to_hex(key) +
                           ", private key is for " + to_hex(sk.public_key().fingerprint()));
  }
}

}  // namespace

mpq_class en_decrypt_exact(const PrivateKey& sk, const EncryptedNumber& c) {
  mpz_class mantissa = decrypt_raw(sk, c.ciphertext);
  return decode_exact(sk.public_key(), EncodedNumber{std::move(mantissa), c.exponent, c.base});
}

double en_decrypt(const PrivateKey& sk, const EncryptedNumber& c) {
  return en_decrypt_exact(sk, c).get_d();
}

RealImage decrypt_image_real(const PrivateKey& sk, const EncryptedImage& image,
                             unsigned threads) {
  check_key(sk, image.key);
  RealImage out{image.width, image.height, {}};
  out.values.resize(image.pixels.size());
  parallel_for(image.pixels.size(), threads,
               [&](std::size_t i) { out.values[i] = en_decrypt(sk, image.pixels[i]); });
  return out;
}

PlainImage decrypt_image(const PrivateKey& sk, const EncryptedImage& image, bool clamp,
                         unsigned threads) {
  check_key(sk, image.key);
  // Round on the exact rational so no tie can be lost to double truncation.
  RealImage rounded{image.width, image.height, {}};
  rounded.values.resize(image.pixels.size());
  parallel_for(image.pixels.size(), threads, [&](std::size_t i) {
    mpq_class v = en_decrypt_exact(sk, image.pixels[i]);
    mpz_class magnitude = abs(v.get_num());
    mpz_class r = (2 * magnitude + v.get_den()) / (2 * v.get_den());
    if (sgn(v) < 0) {
      r = -r;
    }
    rounded.values[i] = r.get_d();
  });
  return quantize(rounded, image.levels, clamp);
}

std::vector<double> decrypt_values(const PrivateKey& sk, const EncryptedNumbers& numbers,
                                   unsigned threads) {
  check_key(sk, numbers.key);
  std::vector<double> out(numbers.values.size());
  parallel_for(numbers.values.size(), threads,
               [&](std::size_t i) { out[i] = en_decrypt(sk, numbers.values[i]); });
  return out;
}

}  // namespace cryptopix
