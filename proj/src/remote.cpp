#include "cryptopix/remote.hpp"

namespace cryptopix {

Request RemoteOps::build_request(const OpParams& params, Bytes payload) const {
  Request request;
  request.op_id = static_cast<std::uint16_t>(op_id_of(params));
  request.params = encode_params(pk_, params);
  request.payload = std::move(payload);
  return request;
}

Bytes RemoteOps::call(const OpParams& params, Bytes payload) {
  Response response = transport_.request(build_request(params, std::move(payload)));
  if (response.status != Status::ok) {
    throw ProtocolError(response.status, response.message);
  }
  return std::move(response.payload);
}

EncryptedImage RemoteOps::negate(const EncryptedImage& image) {
  return deserialize_image(call(NegateParams{}, serialize(image)));
}

EncryptedImage RemoteOps::brightness(const EncryptedImage& image, const EncryptedNumber& value) {
  return deserialize_image(call(BrightnessParams{value}, serialize(image)));
}

EncryptedImage RemoteOps::convolve(const EncryptedImage& image, const Kernel& kernel) {
  return deserialize_image(call(ConvolveParams{kernel}, serialize(image)));
}

std::pair<EncryptedImage, EncryptedImage> RemoteOps::gradient(const EncryptedImage& image,
                                                              const Kernel& h1, const Kernel& h2) {
  return decode_image_pair(call(GradientParams{h1, h2}, serialize(image)));
}

EncryptedImage RemoteOps::sharpen(const EncryptedImage& image, double k, const Kernel& lpf) {
  return deserialize_image(call(SharpenParams{k, lpf}, serialize(image)));
}

EncryptedImage RemoteOps::morph_sum(const EncryptedImage& image,
                                    const StructuringElement& element) {
  return deserialize_image(call(MorphParams{element}, serialize(image)));
}

EncryptedNumbers RemoteOps::equalize_transform(const EncryptedNumbers& histogram,
                                               std::uint32_t levels, std::uint32_t width,
                                               std::uint32_t height) {
  return deserialize_numbers(call(EqualizeParams{levels, width, height}, serialize(histogram)));
}

}  // namespace cryptopix
