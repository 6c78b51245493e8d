#pragma once

#include <stdexcept>

namespace cuspsum {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the operation's domain (bad weight, X < 1, Re s too small, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Evaluation at or too close to a pole of Gamma or zeta.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

class UnsupportedWeight : public DomainError {
 public:
  using DomainError::DomainError;
};

// A window or index range that leaves the table.
class RangeError : public Error {
 public:
  using Error::Error;
};

// The multimodular prime set cannot represent the certified coefficient bound.
class ReconstructionOverflow : public Error {
 public:
  using Error::Error;
};

// Inexact division or any other broken arithmetic invariant during generation.
class ArithmeticError : public Error {
 public:
  using Error::Error;
};

// Files that cannot be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Unreadable, corrupt or mismatched coefficient cache.
class CacheError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace cuspsum
