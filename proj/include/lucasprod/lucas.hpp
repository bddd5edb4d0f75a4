#pragma once

// Lucas sequences of the first kind with Q = ±1:
//   U_0 = 0, U_1 = 1, U_{n+2} = P U_{n+1} + Q U_n,  Δ = P^2 + 4Q > 0 nonsquare.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "lucasprod/bigint.hpp"
#include "lucasprod/error.hpp"

namespace lucasprod {

/// Default ceiling on term indices; enumeration is always user-bounded.
inline constexpr std::uint64_t kDefaultIndexCap = 100000;

/// Validated parameters. alpha is the root of x^2 - Px - Q with |alpha| > 1,
/// beta the other one; both are doubles used for estimates only.
struct LucasParams {
  std::int64_t P = 1;
  int Q = 1;
  std::int64_t delta = 5;
  double alpha = 0.0;
  double beta = 0.0;

  double log_alpha() const { return std::log(std::fabs(alpha)); }
  double sqrt_delta() const { return std::sqrt(static_cast<double>(delta)); }
};

inline bool operator==(const LucasParams& a, const LucasParams& b) {
  return a.P == b.P && a.Q == b.Q;
}

namespace detail {

inline bool is_square_i64(std::int64_t v) {
  if (v < 0) return false;
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(v))));
  for (std::int64_t c = (r > 1 ? r - 1 : 0); c <= r + 1; ++c) {
    if (c * c == v) return true;
  }
  return false;
}

}  // namespace detail

inline LucasParams validate_params(std::int64_t P, std::int64_t Q) {
  if (Q != 1 && Q != -1) {
    throw Error(ErrorKind::BadQ, "Q must be +1 or -1, got " + std::to_string(Q));
  }
  // keeps P^2 + 4Q inside int64
  constexpr std::int64_t kMaxP = std::int64_t{1} << 30;
  if (P > kMaxP || P < -kMaxP) {
    throw Error(ErrorKind::InvalidArgument, "|P| must be at most 2^30");
  }
  const std::int64_t delta = P * P + 4 * Q;
  if (delta <= 0) {
    throw Error(ErrorKind::NonpositiveDiscriminant,
                "discriminant P^2+4Q = " + std::to_string(delta) + " is not positive");
  }
  if (detail::is_square_i64(delta)) {
    throw Error(ErrorKind::SquareDiscriminant,
                "discriminant " + std::to_string(delta) + " is a perfect square (degenerate)");
  }
  LucasParams params;
  params.P = P;
  params.Q = static_cast<int>(Q);
  params.delta = delta;
  const double root = std::sqrt(static_cast<double>(delta));
  const double plus = (static_cast<double>(P) + root) / 2.0;
  const double minus = (static_cast<double>(P) - root) / 2.0;
  if (std::fabs(plus) >= std::fabs(minus)) {
    params.alpha = plus;
    params.beta = minus;
  } else {
    params.alpha = minus;
    params.beta = plus;
  }
  return params;
}

inline void check_index(std::uint64_t n, std::uint64_t cap) {
  if (n > cap) {
    throw Error(ErrorKind::IndexTooLarge,
                "index " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  }
}

/// Exact U_n by index doubling:
///   U_{2k}   = U_k (2 U_{k+1} - P U_k)
///   U_{2k+1} = U_{k+1}^2 + Q U_k^2
inline BigInt lucas_u(const LucasParams& params, std::uint64_t n,
                      std::uint64_t cap = kDefaultIndexCap) {
  check_index(n, cap);
  BigInt u = 0;  // U_k
  BigInt v = 1;  // U_{k+1}
  const BigInt P = big(params.P);
  const long Q = params.Q;
  for (int bit = 63; bit >= 0; --bit) {
    if (n >> bit == 0) continue;
    BigInt even = u * (2 * v - P * u);
    BigInt odd = v * v + Q * (u * u);
    if ((n >> bit) & 1U) {
      u = odd;
      v = P * odd + Q * even;
    } else {
      u = std::move(even);
      v = std::move(odd);
    }
  }
  return u;
}

/// U_n mod m (m >= 1), result in [0, m).
inline BigInt lucas_u_mod(const LucasParams& params, std::uint64_t n, const BigInt& m) {
  BigInt u = 0;
  BigInt v = 1;
  const BigInt P = big(params.P);
  const long Q = params.Q;
  auto reduce = [&m](BigInt& x) { mpz_mod(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()); };
  reduce(v);
  for (int bit = 63; bit >= 0; --bit) {
    if (n >> bit == 0) continue;
    BigInt even = u * (2 * v - P * u);
    BigInt odd = v * v + Q * (u * u);
    reduce(even);
    reduce(odd);
    if ((n >> bit) & 1U) {
      u = odd;
      v = P * odd + Q * even;
      reduce(v);
    } else {
      u = std::move(even);
      v = std::move(odd);
    }
  }
  return u;
}

/// U_0 .. U_count-1 by the three-term recurrence.
inline std::vector<BigInt> lucas_sequence(const LucasParams& params, std::uint64_t count,
                                          std::uint64_t cap = kDefaultIndexCap) {
  if (count > 0) check_index(count - 1, cap);
  std::vector<BigInt> terms;
  terms.reserve(count);
  BigInt a = 0;
  BigInt b = 1;
  for (std::uint64_t i = 0; i < count; ++i) {
    terms.push_back(a);
    BigInt next = params.P * b + params.Q * a;
    a = std::move(b);
    b = std::move(next);
  }
  return terms;
}

/// Leading Binet approximation n log|alpha| - log sqrt(Δ) to log|U_n|.
/// Accurate to about |beta/alpha|^n; not meaningful for tiny n.
inline double growth_estimate(const LucasParams& params, std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "growth_estimate needs n >= 1");
  return static_cast<double>(n) * params.log_alpha() - std::log(params.sqrt_delta());
}

}  // namespace lucasprod
