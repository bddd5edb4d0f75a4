#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "lucasprod/bigint.hpp"

namespace lucasprod {

enum class ErrorKind {
  BadQ,
  NonpositiveDiscriminant,
  SquareDiscriminant,
  IndexTooLarge,
  ZeroInput,
  NotPrime,
  InvalidArgument,
  IncompleteFactorization,
  NotFoundWithinBound,
  CacheIo,
};

inline const char* error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BadQ: return "BadQ";
    case ErrorKind::NonpositiveDiscriminant: return "NonpositiveDiscriminant";
    case ErrorKind::SquareDiscriminant: return "SquareDiscriminant";
    case ErrorKind::IndexTooLarge: return "IndexTooLarge";
    case ErrorKind::ZeroInput: return "ZeroInput";
    case ErrorKind::NotPrime: return "NotPrime";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IncompleteFactorization: return "IncompleteFactorization";
    case ErrorKind::NotFoundWithinBound: return "NotFoundWithinBound";
    case ErrorKind::CacheIo: return "CacheIo";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when a factorization could not be completed within budget.
/// Carries the stuck composite and, when known, the Lucas index it came from.
class IncompleteFactorizationError : public Error {
 public:
  IncompleteFactorizationError(BigInt cofactor, long index = -1)
      : Error(ErrorKind::IncompleteFactorization, describe(cofactor, index)),
        cofactor_(std::move(cofactor)),
        index_(index) {}

  const BigInt& cofactor() const noexcept { return cofactor_; }
  long index() const noexcept { return index_; }

 private:
  static std::string describe(const BigInt& c, long index) {
    std::string s = "could not split composite " + to_string(c);
    if (index >= 0) s += " (from U_" + std::to_string(index) + ")";
    return s;
  }

  BigInt cofactor_;
  long index_;
};

}  // namespace lucasprod
