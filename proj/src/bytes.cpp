#include "cryptopix/bytes.hpp"

#include <algorithm>

#include "cryptopix/errors.hpp"

namespace cryptopix {

std::size_t byte_length(const mpz_class& value) {
  if (value == 0) {
    return 0;
  }
  return (mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8;
}

Bytes to_bytes(const mpz_class& value) {
  if (sgn(value) < 0) {
    throw RangeError("cannot serialize a negative integer");
  }
  Bytes out(byte_length(value));
  if (!out.empty()) {
    std::size_t written = 0;
    mpz_export(out.data(), &written, 1, 1, 1, 0, value.get_mpz_t());
    out.resize(written);
  }
  return out;
}

Bytes to_bytes(const mpz_class& value, std::size_t width) {
  Bytes minimal = to_bytes(value);
  if (minimal.size() > width) {
    throw RangeError("integer does not fit in " + std::to_string(width) + " bytes");
  }
  Bytes out(width - minimal.size(), 0);
  out.insert(out.end(), minimal.begin(), minimal.end());
  return out;
}

mpz_class from_bytes(std::span<const std::uint8_t> bytes) {
  mpz_class out;
  if (!bytes.empty()) {
    mpz_import(out.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  }
  return out;
}

void ByteWriter::u16(std::uint16_t v) {
  buffer_.push_back(static_cast<std::uint8_t>(v >> 8));
  buffer_.push_back(static_cast<std::uint8_t>(v));
}

void ByteWriter::u32(std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    buffer_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

void ByteWriter::u64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    buffer_.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

void ByteWriter::raw(std::span<const std::uint8_t> bytes) {
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

void ByteWriter::raw(std::string_view text) {
  buffer_.insert(buffer_.end(), text.begin(), text.end());
}

void ByteWriter::bigint(const mpz_class& value) {
  Bytes encoded = to_bytes(value);
  u32(static_cast<std::uint32_t>(encoded.size()));
  raw(encoded);
}

void ByteWriter::bigint_fixed(const mpz_class& value, std::size_t width) {
  raw(to_bytes(value, width));
}

void ByteWriter::short_string(std::string_view text) {
  if (text.size() > 0xFFFF) {
    throw RangeError("string too long for u16 length prefix");
  }
  u16(static_cast<std::uint16_t>(text.size()));
  raw(text);
}

std::span<const std::uint8_t> ByteReader::raw(std::size_t count) {
  if (count > remaining()) {
    throw FormatError("truncated input: need " + std::to_string(count) + " bytes, have " +
                      std::to_string(remaining()));
  }
  auto out = data_.subspan(offset_, count);
  offset_ += count;
  return out;
}

std::uint8_t ByteReader::u8() { return raw(1)[0]; }

std::uint16_t ByteReader::u16() {
  auto b = raw(2);
  return static_cast<std::uint16_t>((b[0] << 8) | b[1]);
}

std::uint32_t ByteReader::u32() {
  std::uint32_t v = 0;
  for (auto byte : raw(4)) {
    v = (v << 8) | byte;
  }
  return v;
}

std::uint64_t ByteReader::u64() {
  std::uint64_t v = 0;
  for (auto byte : raw(8)) {
    v = (v << 8) | byte;
  }
  return v;
}

void ByteReader::expect_magic(std::string_view magic, std::string_view what) {
  auto got = raw(magic.size());
  if (!std::equal(got.begin(), got.end(), magic.begin(), magic.end())) {
    throw FormatError(std::string(what) + ": bad magic, expected '" + std::string(magic) + "'");
  }
}

mpz_class ByteReader::bigint() {
  std::uint32_t length = u32();
  return from_bytes(raw(length));
}

std::string ByteReader::short_string() {
  std::uint16_t length = u16();
  auto chars = raw(length);
  return std::string(chars.begin(), chars.end());
}

void ByteReader::expect_done(std::string_view what) const {
  if (!done()) {
    throw FormatError(std::string(what) + ": " + std::to_string(remaining()) + " trailing bytes");
  }
}

}  // namespace cryptopix
