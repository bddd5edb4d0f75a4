#pragma once

// Heights and radicals of the Binet triple
//   a = beta^n,  b = (alpha - beta) e s^k,  c = alpha^n,   a + b = c
// over K = Q(sqrt Δ), where U_n = e s^k. alpha and beta are units, so only
// the archimedean places contribute to the height and only the prime ideals
// dividing (b) contribute to the radical.

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>

#include "lucasprod/factoring.hpp"
#include "lucasprod/lucas.hpp"
#include "lucasprod/term_factorizer.hpp"

namespace lucasprod {

/// Δ = f^2 d with d squarefree; D is the discriminant of Q(sqrt d).
struct QuadraticFieldData {
  std::int64_t delta = 0;
  std::int64_t d = 0;
  std::int64_t D = 0;
  std::int64_t f = 0;
};

inline QuadraticFieldData field_data(std::int64_t delta) {
  if (delta <= 0) {
    throw Error(ErrorKind::NonpositiveDiscriminant, "field_data needs a positive discriminant");
  }
  QuadraticFieldData data{delta, 1, 0, 1};
  std::int64_t rest = delta;
  for (std::int64_t p = 2; p * p <= rest; ++p) {
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) data.f *= p;
    if (e % 2 == 1) data.d *= p;
  }
  data.d *= rest;
  if (data.d == 1) {
    throw Error(ErrorKind::SquareDiscriminant, std::to_string(delta) + " is a perfect square");
  }
  data.D = (data.d % 4 == 1) ? data.d : 4 * data.d;
  return data;
}

enum class Splitting { Split, Inert, Ramified };

inline const char* splitting_name(Splitting s) {
  switch (s) {
    case Splitting::Split: return "split";
    case Splitting::Inert: return "inert";
    case Splitting::Ramified: return "ramified";
  }
  return "?";
}

/// Decomposition of p in K, read off the Kronecker symbol (D/p).
inline Splitting splitting_type(const QuadraticFieldData& field, const BigInt& p) {
  const BigInt D = big(field.D);
  const int symbol = mpz_kronecker(D.get_mpz_t(), p.get_mpz_t());
  if (symbol == 0) return Splitting::Ramified;
  return symbol > 0 ? Splitting::Split : Splitting::Inert;
}

struct BinetTriple {
  std::uint64_t n = 0;
  BigInt e = 1;
  BigInt s = 1;
  unsigned long k = 2;
};

/// Builds the triple for U_n = e s^k, checking the decomposition.
inline BinetTriple make_triple(const LucasParams& params, std::uint64_t n,
                               const PowerFreeDecomposition& dec) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "Binet triple needs n >= 1");
  if (dec.s < 1 || dec.e == 0) throw Error(ErrorKind::InvalidArgument, "bad decomposition");
  if (dec.e * pow(dec.s, dec.k) != lucas_u(params, n)) {
    throw Error(ErrorKind::InvalidArgument,
                "e*s^k does not equal U_" + std::to_string(n));
  }
  return {n, dec.e, dec.s, dec.k};
}

/// Logs of |a|, |b|, |c| at the two real embeddings. The second embedding
/// swaps alpha and beta.
struct EmbeddingLogs {
  double a = 0, b = 0, c = 0;
};

inline std::pair<EmbeddingLogs, EmbeddingLogs> embedding_logs(const LucasParams& params,
                                                              const BinetTriple& t) {
  const double n = static_cast<double>(t.n);
  const double large = n * std::log(std::fabs(params.alpha));
  const double small = n * std::log(std::fabs(params.beta));
  const double b = std::log(params.sqrt_delta()) + log_abs(t.e) +
                   static_cast<double>(t.k) * log_abs(t.s);
  return {{small, b, large}, {large, b, small}};
}

/// Absolute logarithmic projective height h(a:b:c). Finite places give 0
/// since a, c are units and b is integral.
inline double binet_height(const LucasParams& params, const BinetTriple& t) {
  const auto [first, second] = embedding_logs(params, t);
  const auto local = [](const EmbeddingLogs& v) { return std::max({v.a, v.b, v.c}); };
  return (local(first) + local(second)) / 2.0;
}

/// Radical rad_K(a:b:c): (1/2) sum of log N(P) over prime ideals P | (b).
/// Per rational prime p | Δ e s this is log p when p splits or is inert and
/// (log p)/2 when it ramifies. `term` is the factorization of U_n = e s^k.
inline double binet_radical(const LucasParams& params, const BinetTriple& t,
                            const Factorization& term) {
  require_complete(term, static_cast<long>(t.n));
  const QuadraticFieldData field = field_data(params.delta);
  std::set<BigInt> primes;
  for (const auto& [p, e] : factorize(big(params.delta)).factors) primes.insert(p);
  // every prime of U_n = e s^k divides e or s
  for (const auto& [p, e] : term.factors) primes.insert(p);
  double total = 0.0;
  for (const BigInt& p : primes) {
    const double lp = log_abs(p);
    total += splitting_type(field, p) == Splitting::Ramified ? lp / 2.0 : lp;
  }
  return total;
}

struct QualityReport {
  std::uint64_t n = 0;
  unsigned long k = 2;
  BigInt e = 1;
  BigInt s = 1;
  double height = 0;
  double radical = 0;
  std::optional<double> quality;  // height / radical, when radical > 0
  double lower_slack = 0;         // height - n log|alpha|
  double upper_slack_term = 0;    // radical - log s
};

inline QualityReport quality_report(const LucasParams& params, std::uint64_t n, unsigned long k,
                                    const Factorization& term) {
  const PowerFreeDecomposition dec = power_free_part(term, k);
  const BinetTriple t = make_triple(params, n, dec);
  QualityReport r;
  r.n = n;
  r.k = k;
  r.e = dec.e;
  r.s = dec.s;
  r.height = binet_height(params, t);
  r.radical = binet_radical(params, t, term);
  if (r.radical > 0) r.quality = r.height / r.radical;
  r.lower_slack = r.height - static_cast<double>(n) * params.log_alpha();
  r.upper_slack_term = r.radical - log_abs(dec.s);
  return r;
}

inline QualityReport quality_report(TermFactorizer& terms, std::uint64_t n, unsigned long k) {
  return quality_report(terms.params(), n, k, terms.factor_complete(n));
}

}  // namespace lucasprod
