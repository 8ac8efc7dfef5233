#pragma once

#include <cstdint>
#include <utility>

#include "cryptopix/protocol.hpp"
#include "cryptopix/transport.hpp"

namespace cryptopix {

/// Client-side stubs: one transport round trip per call. Non-ok responses
/// raise ProtocolError with the server's status and message.
class RemoteOps {
 public:
  RemoteOps(Transport& transport, PublicKey pk) : transport_(transport), pk_(std::move(pk)) {}

  EncryptedImage negate(const EncryptedImage& image);
  EncryptedImage brightness(const EncryptedImage& image, const EncryptedNumber& value);
  EncryptedImage convolve(const EncryptedImage& image, const Kernel& kernel);
  std::pair<EncryptedImage, EncryptedImage> gradient(const EncryptedImage& image, const Kernel& h1,
                                                     const Kernel& h2);
  EncryptedImage sharpen(const EncryptedImage& image, double k, const Kernel& lpf);
  EncryptedImage morph_sum(const EncryptedImage& image, const StructuringElement& element);
  EncryptedNumbers equalize_transform(const EncryptedNumbers& histogram, std::uint32_t levels,
                                      std::uint32_t width, std::uint32_t height);

  /// The request frame a call would send; useful for inspecting what the
  /// server learns.
  Request build_request(const OpParams& params, Bytes payload) const;
  Bytes call(const OpParams& params, Bytes payload);

  const PublicKey& public_key() const { return pk_; }

 private:
  Transport& transport_;
  PublicKey pk_;
};

}  // namespace cryptopix
