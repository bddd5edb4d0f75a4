#pragma once

// Coprime product equations  A y^k = U_{n_1} ... U_{n_r}.
//
// Pairwise coprime indices give pairwise coprime terms, so every prime
// outside A must already appear to a multiple of k inside a single factor.
// Candidate indices are therefore restricted to the admissible set
// {n >= 2 : k-th-power-free part of U_n supported on Supp(A)}, and solutions
// are cliques of the coprimality graph on that set.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lucasprod/factoring.hpp"
#include "lucasprod/lucas.hpp"
#include "lucasprod/square_class.hpp"
#include "lucasprod/term_factorizer.hpp"

namespace lucasprod {

struct ProductEquation {
  LucasParams params;
  BigInt A = 1;
  unsigned long k = 2;
  std::uint64_t max_index = 2;
  unsigned max_factors = 1;
};

inline ProductEquation make_equation(const LucasParams& params, const BigInt& A, unsigned long k,
                                     std::uint64_t max_index, unsigned max_factors) {
  if (A == 0) throw Error(ErrorKind::InvalidArgument, "A must be nonzero");
  if (k < 2) throw Error(ErrorKind::InvalidArgument, "k must be at least 2");
  if (max_index < 2) throw Error(ErrorKind::InvalidArgument, "max index must be at least 2");
  if (max_factors < 1) throw Error(ErrorKind::InvalidArgument, "max factors must be at least 1");
  check_index(max_index, kDefaultIndexCap);
  return {params, A, k, max_index, max_factors};
}

struct AdmissibleSet {
  std::vector<std::uint64_t> indices;  // ascending, all in [2, max_index]
};

/// True iff the k-th-power-free part of `term` is supported on the primes
/// of A. Decided without factoring the term: after removing the primes of A,
/// what is left must be a perfect k-th power.
inline bool supported_on(const BigInt& term, const Factorization& A, unsigned long k) {
  BigInt rest = abs_value(term);
  for (const auto& [p, e] : A.factors) {
    mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
  }
  return exact_root(rest, k).has_value();
}

inline AdmissibleSet admissible_indices(const ProductEquation& eq, const Factorization& A) {
  require_complete(A);
  AdmissibleSet set;
  BigInt prev = 0;
  BigInt cur = 1;  // U_1
  for (std::uint64_t n = 2; n <= eq.max_index; ++n) {
    BigInt next = eq.params.P * cur + eq.params.Q * prev;
    prev = std::move(cur);
    cur = std::move(next);
    if (supported_on(cur, A, eq.k)) set.indices.push_back(n);
  }
  return set;
}

inline AdmissibleSet admissible_indices(const ProductEquation& eq, const Factorizer& factorizer) {
  return admissible_indices(eq, factorizer.factorize_complete(eq.A));
}

struct ValuationEntry {
  std::uint64_t index = 0;
  unsigned long exponent = 0;

  friend bool operator==(const ValuationEntry&, const ValuationEntry&) = default;
};

struct SolutionCertificate {
  std::vector<std::uint64_t> indices;  // strictly increasing, pairwise coprime, >= 2
  BigInt y = 1;
  bool class_check = false;
  // prime -> factors carrying it (nonzero exponents only), ascending by index
  std::map<BigInt, std::vector<ValuationEntry>> valuations;
  bool canonical = false;  // index 1 was stripped from the input
  bool trivial = false;    // empty product

  friend bool operator==(const SolutionCertificate&, const SolutionCertificate&) = default;
};

enum class RejectionKind {
  NotPairwiseCoprime,
  ClassMismatch,
  NotDivisible,
  NotKthPower,
  NegativeQuotientEvenK,
};

inline const char* rejection_name(RejectionKind kind) {
  switch (kind) {
    case RejectionKind::NotPairwiseCoprime: return "NotPairwiseCoprime";
    case RejectionKind::ClassMismatch: return "ClassMismatch";
    case RejectionKind::NotDivisible: return "NotDivisible";
    case RejectionKind::NotKthPower: return "NotKthPower";
    case RejectionKind::NegativeQuotientEvenK: return "NegativeQuotientEvenK";
  }
  return "Unknown";
}

struct Rejection {
  RejectionKind kind;
  std::string detail;
  std::vector<std::uint64_t> indices;  // offending pair, or the index whose class is wrong
  std::optional<BigInt> prime;         // for NotDivisible
};

using VerifyOutcome = std::variant<SolutionCertificate, Rejection>;

namespace detail {

inline std::string pair_text(std::uint64_t a, std::uint64_t b) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

}  // namespace detail

/// Checks one index tuple in order: coprimality, square/power class,
/// divisibility by A, k-th-power quotient, sign.
inline VerifyOutcome verify_solution(const ProductEquation& eq, std::vector<std::uint64_t> indices,
                                     TermFactorizer& terms, const Factorization& A) {
  require_complete(A);
  if (indices.empty()) throw Error(ErrorKind::InvalidArgument, "no indices given");
  for (std::uint64_t n : indices) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "indices must be >= 1");
    check_index(n, kDefaultIndexCap);
  }

  SolutionCertificate cert;
  const auto before = indices.size();
  std::erase(indices, std::uint64_t{1});
  cert.canonical = indices.size() != before;

  for (std::size_t i = 0; i < indices.size(); ++i) {
    for (std::size_t j = i + 1; j < indices.size(); ++j) {
      if (std::gcd(indices[i], indices[j]) != 1) {
        return Rejection{RejectionKind::NotPairwiseCoprime,
                         "gcd" + detail::pair_text(indices[i], indices[j]) + " != 1",
                         {indices[i], indices[j]},
                         std::nullopt};
      }
    }
  }
  std::sort(indices.begin(), indices.end());
  cert.indices = indices;
  cert.trivial = indices.empty();

  std::vector<Factorization> factored;
  factored.reserve(indices.size());
  for (std::uint64_t n : indices) factored.push_back(terms.factor_complete(n));

  std::set<BigInt> support;
  for (const auto& [p, e] : A.factors) support.insert(p);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (!supported_power_part(factored[i], eq.k, support)) {
      const std::string cls = eq.k == 2 ? "[" + class_of(factored[i]).str() + "]"
                                        : to_string(power_free_part(factored[i], eq.k).e);
      return Rejection{RejectionKind::ClassMismatch,
                       "U_" + std::to_string(indices[i]) + " has power-free part " + cls +
                           " not supported on the primes of A",
                       {indices[i]},
                       std::nullopt};
    }
  }
  if (eq.k == 2) {
    std::vector<SquareClass> classes;
    for (const auto& f : factored) classes.push_back(class_of(f));
    if (!compatibility(classes, A)) {
      return Rejection{RejectionKind::ClassMismatch,
                       "product of classes differs from [A] = [" + class_of(A).str() + "]",
                       indices,
                       std::nullopt};
    }
  }
  cert.class_check = true;

  Factorization product;
  for (const auto& f : factored) {
    product.sign *= f.sign;
    for (const auto& [p, e] : f.factors) product.add(p, e);
  }
  for (const auto& [p, e] : A.factors) {
    if (product.exponent(p) < e) {
      return Rejection{RejectionKind::NotDivisible,
                       "v_" + to_string(p) + " of the product is below v_" + to_string(p) + "(A)",
                       indices,
                       p};
    }
  }

  const BigInt quotient = product.value() / (A.value());
  const auto root = exact_root(quotient, eq.k);
  if (!root) {
    return Rejection{RejectionKind::NotKthPower,
                     "product / A = " + to_string(quotient) + " is not a " + std::to_string(eq.k) +
                         "-th power",
                     indices,
                     std::nullopt};
  }
  if (sign(quotient) < 0 && eq.k % 2 == 0) {
    return Rejection{RejectionKind::NegativeQuotientEvenK,
                     "product / A = " + to_string(quotient) + " is negative and k is even",
                     indices,
                     std::nullopt};
  }
  cert.y = sign(quotient) < 0 ? BigInt(-*root) : *root;

  std::set<BigInt> primes = support;
  for (const auto& f : factored) {
    for (const auto& [p, e] : f.factors) primes.insert(p);
  }
  for (const BigInt& p : primes) {
    auto& row = cert.valuations[p];
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (auto e = factored[i].exponent(p); e > 0) row.push_back({indices[i], e});
    }
  }
  return cert;
}

inline VerifyOutcome verify_solution(const ProductEquation& eq, std::vector<std::uint64_t> indices,
                                     TermFactorizer& terms) {
  return verify_solution(eq, std::move(indices), terms,
                         terms.factorizer().factorize_complete(eq.A));
}

/// Valuation-separation checks on a certificate: primes outside A appear in
/// each factor to a multiple of k; primes of A sit in exactly one factor with
/// exponent >= v_p(A) and congruent to it mod k. Returns violations found.
inline std::vector<std::string> certificate_violations(const ProductEquation& eq,
                                                       const SolutionCertificate& cert,
                                                       const Factorization& A) {
  std::vector<std::string> out;
  for (const auto& [p, row] : cert.valuations) {
    const unsigned long vA = A.exponent(p);
    if (vA == 0) {
      for (const auto& entry : row) {
        if (entry.exponent % eq.k != 0) {
          out.push_back("p=" + to_string(p) + " not dividing A has exponent " +
                        std::to_string(entry.exponent) + " in U_" + std::to_string(entry.index));
        }
      }
    } else if (row.size() != 1) {
      out.push_back("p=" + to_string(p) + " dividing A is carried by " +
                    std::to_string(row.size()) + " factors");
    } else if (row[0].exponent < vA || (row[0].exponent - vA) % eq.k != 0) {
      out.push_back("p=" + to_string(p) + " carrier exponent " + std::to_string(row[0].exponent) +
                    " incompatible with v_p(A)=" + std::to_string(vA));
    }
  }
  return out;
}

/// The empty product: 1 = A y^k, solvable iff A = 1, or A = -1 with k odd.
inline std::optional<SolutionCertificate> trivial_solution(const ProductEquation& eq) {
  const bool solvable = eq.A == 1 || (eq.A == -1 && eq.k % 2 == 1);
  if (!solvable) return std::nullopt;
  SolutionCertificate cert;
  cert.y = eq.A;
  cert.class_check = true;
  cert.trivial = true;
  return cert;
}

/// All nontrivial canonical solutions, sorted lexicographically by index
/// tuple. The empty product is left to trivial_solution().
/// `jobs` > 1 factors the admissible terms concurrently first.
inline std::vector<SolutionCertificate> enumerate_solutions(const ProductEquation& eq,
                                                            TermFactorizer& terms,
                                                            unsigned jobs = 1) {
  const Factorization A = terms.factorizer().factorize_complete(eq.A);
  const AdmissibleSet admissible = admissible_indices(eq, A);
  if (jobs > 1) terms.factor_all(admissible.indices, jobs);

  std::vector<BigInt> values;
  values.reserve(admissible.indices.size());
  for (std::uint64_t n : admissible.indices) values.push_back(lucas_u(eq.params, n));

  std::vector<SolutionCertificate> out;
  std::vector<std::uint64_t> clique;

  const auto accept = [&](const BigInt& product) {
    if (!divisible(product, eq.A)) return;
    const BigInt quotient = product / eq.A;
    if (eq.k % 2 == 0 && sign(quotient) < 0) return;
    if (!exact_root(quotient, eq.k)) return;
    if (clique.empty()) return;  // reported by trivial_solution()
    auto outcome = verify_solution(eq, clique, terms, A);
    if (auto* cert = std::get_if<SolutionCertificate>(&outcome)) {
      out.push_back(std::move(*cert));
    } else {
      throw Error(ErrorKind::InvalidArgument,
                  std::string("internal: search accepted a tuple rejected by verification: ") +
                      std::get<Rejection>(outcome).detail);
    }
  };

  // depth-first over cliques, extending only with larger coprime indices
  const auto search = [&](auto&& self, std::size_t start, const BigInt& product) -> void {
    accept(product);
    if (clique.size() == eq.max_factors) return;
    for (std::size_t i = start; i < admissible.indices.size(); ++i) {
      const std::uint64_t n = admissible.indices[i];
      const bool coprime = std::all_of(clique.begin(), clique.end(),
                                       [n](std::uint64_t m) { return std::gcd(m, n) == 1; });
      if (!coprime) continue;
      clique.push_back(n);
      self(self, i + 1, product * values[i]);
      clique.pop_back();
    }
  };
  search(search, 0, BigInt(1));

  std::sort(out.begin(), out.end(),
            [](const SolutionCertificate& a, const SolutionCertificate& b) {
              return a.indices < b.indices;
            });
  return out;
}

}  // namespace lucasprod
