#pragma once

// Rank of apparition z(p), primitive prime divisors, and the unconditional
// multiplicity-one obstruction for coprime product solutions.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lucasprod/factoring.hpp"
#include "lucasprod/lucas.hpp"
#include "lucasprod/term_factorizer.hpp"

namespace lucasprod {

struct RankOfApparition {
  BigInt p;
  std::uint64_t z = 0;
};

/// Smallest n >= 1 with p | U_n, by scanning U_n mod p for n <= p + 1.
inline RankOfApparition rank_of_apparition(const LucasParams& params, const BigInt& p) {
  if (!is_prime(p)) throw Error(ErrorKind::NotPrime, to_string(p) + " is not prime");
  if (mpz_sizeinbase(p.get_mpz_t(), 2) > 62) {
    throw Error(ErrorKind::InvalidArgument, "prime too large for a rank scan: " + to_string(p));
  }
  using u128 = unsigned __int128;
  const std::uint64_t m = to_u64(p);
  const auto reduce = [m](std::int64_t v) {
    std::int64_t r = v % static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
  };
  const std::uint64_t P = reduce(params.P);
  const std::uint64_t Q = reduce(params.Q);
  std::uint64_t prev = 0;  // U_{n-1}
  std::uint64_t cur = 1;   // U_n
  for (std::uint64_t n = 1; n <= m + 1; ++n) {
    if (cur == 0) return {p, n};
    const std::uint64_t next =
        static_cast<std::uint64_t>((static_cast<u128>(P) * cur + static_cast<u128>(Q) * prev) % m);
    prev = cur;
    cur = next;
  }
  throw Error(ErrorKind::NotFoundWithinBound,
              "no n <= p+1 with " + to_string(p) + " | U_n; rank expectation violated");
}

/// Z_A = { z(p) : p | A }.
inline std::set<std::uint64_t> apparition_set(const LucasParams& params, const Factorization& A) {
  require_complete(A);
  std::set<std::uint64_t> out;
  for (const auto& [p, e] : A.factors) out.insert(rank_of_apparition(params, p).z);
  return out;
}

/// z(p) for a prime p known to divide U_n: the least divisor d of n with p | U_d.
inline std::uint64_t rank_within(const LucasParams& params, const BigInt& p, std::uint64_t n) {
  for (std::uint64_t d : divisors(n)) {
    if (lucas_u_mod(params, d, p) == 0) return d;
  }
  throw Error(ErrorKind::InvalidArgument, to_string(p) + " does not divide U_" + std::to_string(n));
}

struct PrimitiveEntry {
  BigInt p;
  unsigned long multiplicity = 0;
  std::uint64_t rank = 0;
  bool primitive = false;
};

struct PrimitiveReport {
  std::uint64_t n = 0;
  std::vector<PrimitiveEntry> entries;  // ascending by p
};

inline PrimitiveReport primitive_divisors(const LucasParams& params, std::uint64_t n,
                                          const Factorization& term) {
  require_complete(term, static_cast<long>(n));
  PrimitiveReport report{n, {}};
  for (const auto& [p, e] : term.factors) {
    const std::uint64_t z = rank_within(params, p, n);
    report.entries.push_back({p, e, z, z == n});
  }
  return report;
}

inline PrimitiveReport primitive_divisors(TermFactorizer& terms, std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "n must be at least 1");
  return primitive_divisors(terms.params(), n, terms.factor_complete(n));
}

struct ObstructionVerdict {
  bool admissible = true;
  bool in_apparition_set = false;  // n in Z_A
  std::optional<BigInt> witness;   // primitive p not dividing A with v_p(U_n) = 1
  std::string reason;
};

/// Excludes n when n is not in Z_A and U_n has a primitive prime p not
/// dividing A with v_p(U_n) = 1. Such n cannot occur in a coprime product
/// solution of A y^k = prod U_{n_i} for any k >= 2.
inline ObstructionVerdict obstruction_filter(const PrimitiveReport& report, const Factorization& A) {
  require_complete(A);
  ObstructionVerdict verdict;
  for (const auto& entry : report.entries) {
    // a primitive divisor of U_n that divides A has z(p) = n
    if (entry.primitive && A.exponent(entry.p) > 0) verdict.in_apparition_set = true;
  }
  if (verdict.in_apparition_set) {
    verdict.reason = "n is the rank of apparition of a prime dividing A";
    return verdict;
  }
  for (const auto& entry : report.entries) {
    if (entry.primitive && entry.multiplicity == 1) {
      verdict.admissible = false;
      verdict.witness = entry.p;
      verdict.reason = "primitive divisor " + to_string(entry.p) + " occurs with multiplicity 1";
      return verdict;
    }
  }
  verdict.reason = "every primitive divisor outside A has multiplicity >= 2";
  return verdict;
}

inline ObstructionVerdict obstruction_filter(TermFactorizer& terms, const Factorization& A,
                                             std::uint64_t n, unsigned long k) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "obstruction_filter needs n >= 2");
  if (k < 2) throw Error(ErrorKind::InvalidArgument, "k must be at least 2");
  return obstruction_filter(primitive_divisors(terms, n), A);
}

}  // namespace lucasprod
