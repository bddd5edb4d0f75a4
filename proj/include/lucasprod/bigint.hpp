#pragma once

// Thin helpers over GMP's mpz_class. Everything exact goes through BigInt.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace lucasprod {

using BigInt = mpz_class;

inline BigInt big(std::int64_t v) { return BigInt(static_cast<long>(v)); }

inline BigInt big_u(std::uint64_t v) { return BigInt(static_cast<unsigned long>(v)); }

inline std::string to_string(const BigInt& v) { return v.get_str(10); }

/// Parses a signed decimal integer; returns nullopt on any malformed input.
inline std::optional<BigInt> parse_bigint(std::string_view text) {
  std::string s(text);
  if (s.empty()) return std::nullopt;
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) return std::nullopt;
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
  }
  if (s[0] == '+') s.erase(0, 1);
  BigInt r;
  if (mpz_set_str(r.get_mpz_t(), s.c_str(), 10) != 0) return std::nullopt;
  return r;
}

inline int sign(const BigInt& v) { return mpz_sgn(v.get_mpz_t()); }

inline BigInt abs_value(const BigInt& v) {
  BigInt r;
  mpz_abs(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

inline BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline BigInt pow(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline bool divisible(const BigInt& n, const BigInt& d) {
  return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

inline bool fits_u64(const BigInt& v) {
  return sign(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64;
}

inline std::uint64_t to_u64(const BigInt& v) {
  // mpz_get_ui is 64-bit on LP64 targets
  return static_cast<std::uint64_t>(mpz_get_ui(v.get_mpz_t()));
}

/// Natural log of |v| for v != 0, without overflow for huge v.
inline double log_abs(const BigInt& v) {
  long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, v.get_mpz_t());
  return std::log(std::fabs(mant)) + static_cast<double>(exp2) * std::log(2.0);
}

/// Exact k-th root of |v| if |v| is a perfect k-th power.
inline std::optional<BigInt> exact_root(const BigInt& v, unsigned long k) {
  BigInt a = abs_value(v);
  BigInt r;
  if (mpz_root(r.get_mpz_t(), a.get_mpz_t(), k) == 0) return std::nullopt;
  return r;
}

inline bool is_perfect_square(const BigInt& v) {
  return sign(v) >= 0 && mpz_perfect_square_p(v.get_mpz_t()) != 0;
}

}  // namespace lucasprod
