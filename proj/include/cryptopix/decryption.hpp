#pragma once

#include <vector>

#include <gmpxx.h>

#include "cryptopix/encoding.hpp"
#include "cryptopix/image.hpp"
#include "cryptopix/paillier_private.hpp"

namespace cryptopix {

/// Decrypts the mantissa and decodes it; the middle zone raises OverflowDetectedError.
mpq_class en_decrypt_exact(const PrivateKey& sk, const EncryptedNumber& c);
double en_decrypt(const PrivateKey& sk, const EncryptedNumber& c);

RealImage decrypt_image_real(const PrivateKey& sk, const EncryptedImage& image,
                             unsigned threads = 0);

/// Decrypts, rounds half away from zero, then clamps into [0, levels - 1] or
/// raises RangeError for out-of-range pixels when clamp is false.
PlainImage decrypt_image(const PrivateKey& sk, const EncryptedImage& image, bool clamp,
                         unsigned threads = 0);

std::vector<double> decrypt_values(const PrivateKey& sk, const EncryptedNumbers& numbers,
                                   unsigned threads = 0);

}  // namespace cryptopix
