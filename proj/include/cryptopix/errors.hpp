#pragma once

#include <stdexcept>
#include <string>

namespace cryptopix {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A plaintext, scalar or key parameter lies outside its permitted range.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// Ciphertext is not a unit of Z_{n^2}.
class MalformedCiphertextError : public Error {
 public:
  using Error::Error;
};

/// Operands were produced under different public keys.
class KeyMismatchError : public Error {
 public:
  using Error::Error;
};

/// A real value is too large to be folded into the positive or negative third of Z_n.
class EncodingOverflowError : public Error {
 public:
  using Error::Error;
};

/// A decrypted mantissa landed in the forbidden middle zone of Z_n.
class OverflowDetectedError : public Error {
 public:
  using Error::Error;
};

/// Requested exponent alignment would need a division.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed serialized data: bad magic, truncated buffer, unsupported version.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace cryptopix
