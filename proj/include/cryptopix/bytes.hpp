#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace cryptopix {

using Bytes = std::vector<std::uint8_t>;

/// Minimal big-endian unsigned encoding of `value` (empty for zero).
Bytes to_bytes(const mpz_class& value);
/// Big-endian encoding left-padded with zeros to exactly `width` bytes.
Bytes to_bytes(const mpz_class& value, std::size_t width);
mpz_class from_bytes(std::span<const std::uint8_t> bytes);
std::size_t byte_length(const mpz_class& value);

/// Appends big-endian integers and blobs to a growing buffer.
class ByteWriter {
 public:
  ByteWriter() = default;

  void u8(std::uint8_t v) { buffer_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void raw(std::span<const std::uint8_t> bytes);
  void raw(std::string_view text);
  /// u32 length prefix followed by the minimal big-endian bytes.
  void bigint(const mpz_class& value);
  void bigint_fixed(const mpz_class& value, std::size_t width);
  /// u16 length prefix followed by the characters.
  void short_string(std::string_view text);

  const Bytes& bytes() const { return buffer_; }
  Bytes take() && { return std::move(buffer_); }
  std::size_t size() const { return buffer_.size(); }

 private:
  Bytes buffer_;
};

/// Bounds-checked reader over a byte span; every underflow raises FormatError.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::span<const std::uint8_t> raw(std::size_t count);
  void expect_magic(std::string_view magic, std::string_view what);
  mpz_class bigint();
  mpz_class bigint_fixed(std::size_t width) { return from_bytes(raw(width)); }
  std::string short_string();

  std::size_t remaining() const { return data_.size() - offset_; }
  bool done() const { return remaining() == 0; }
  void expect_done(std::string_view what) const;

 private:
  std::span<const std::uint8_t> data_;
  std::size_t offset_ = 0;
};

}  // namespace cryptopix
