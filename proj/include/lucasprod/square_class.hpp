#pragma once

// The group Q^x/(Q^x)^2, its finitely generated subgroups G_S, and the
// S-supported k-th-power-free predicate.

#include <algorithm>
#include <iterator>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "lucasprod/bigint.hpp"
#include "lucasprod/error.hpp"
#include "lucasprod/factoring.hpp"

namespace lucasprod {

/// Canonical representative: sign times the product of a strictly
/// increasing list of distinct primes.
class SquareClass {
 public:
  SquareClass() = default;

  /// primes need not be sorted; repeated primes cancel in pairs.
  SquareClass(int sign, std::vector<BigInt> primes) : sign_(sign < 0 ? -1 : 1) {
    std::sort(primes.begin(), primes.end());
    for (auto& p : primes) {
      if (!primes_.empty() && primes_.back() == p) {
        primes_.pop_back();
      } else {
        primes_.push_back(std::move(p));
      }
    }
  }

  int sign() const { return sign_; }
  const std::vector<BigInt>& primes() const { return primes_; }
  bool is_identity() const { return sign_ == 1 && primes_.empty(); }

  /// The signed squarefree integer this class stands for.
  BigInt representative() const {
    BigInt r = sign_;
    for (const auto& p : primes_) r *= p;
    return r;
  }

  std::string str() const { return to_string(representative()); }

  friend bool operator==(const SquareClass&, const SquareClass&) = default;

 private:
  int sign_ = 1;
  std::vector<BigInt> primes_;
};

/// G_S = <-1, p : p in S>.
class ClassGroup {
 public:
  ClassGroup() = default;
  explicit ClassGroup(std::set<BigInt> primes) : primes_(std::move(primes)) {}

  /// G_A, generated by -1 and the primes dividing A.
  static ClassGroup of(const Factorization& A) {
    require_complete(A);
    std::set<BigInt> s;
    for (const auto& [p, e] : A.factors) s.insert(p);
    return ClassGroup(std::move(s));
  }

  const std::set<BigInt>& primes() const { return primes_; }

  bool contains_prime(const BigInt& p) const { return primes_.count(p) != 0; }

 private:
  std::set<BigInt> primes_;
};

inline SquareClass class_of(const Factorization& f) {
  require_complete(f);
  std::vector<BigInt> odd;
  for (const auto& [p, e] : f.factors) {
    if (e % 2 == 1) odd.push_back(p);
  }
  return SquareClass(f.sign, std::move(odd));
}

inline SquareClass class_of(const BigInt& N, std::uint64_t budget = kDefaultRhoBudget) {
  return class_of(factorize(N, budget));
}

inline SquareClass class_mul(const SquareClass& a, const SquareClass& b) {
  std::vector<BigInt> merged;
  std::set_symmetric_difference(a.primes().begin(), a.primes().end(), b.primes().begin(),
                                b.primes().end(), std::back_inserter(merged));
  return SquareClass(a.sign() * b.sign(), std::move(merged));
}

inline bool in_group(const SquareClass& c, const ClassGroup& group) {
  return std::all_of(c.primes().begin(), c.primes().end(),
                     [&](const BigInt& p) { return group.contains_prime(p); });
}

/// True iff the product of the classes equals [A].
inline bool compatibility(std::span<const SquareClass> classes, const Factorization& A) {
  SquareClass product;
  for (const auto& c : classes) product = class_mul(product, c);
  return product == class_of(A);
}

inline bool compatibility(std::span<const SquareClass> classes, const BigInt& A,
                          std::uint64_t budget = kDefaultRhoBudget) {
  if (A == 0) throw Error(ErrorKind::ZeroInput, "A must be nonzero");
  return compatibility(classes, factorize(A, budget));
}

/// True iff the k-th-power-free part of N has every prime divisor in S.
inline bool supported_power_part(const Factorization& f, unsigned long k,
                                 const std::set<BigInt>& S) {
  if (k < 2) throw Error(ErrorKind::InvalidArgument, "k must be at least 2");
  require_complete(f);
  return std::all_of(f.factors.begin(), f.factors.end(), [&](const auto& entry) {
    return entry.second % k == 0 || S.count(entry.first) != 0;
  });
}

inline bool supported_power_part(const BigInt& N, unsigned long k, const std::set<BigInt>& S,
                                 std::uint64_t budget = kDefaultRhoBudget) {
  return supported_power_part(factorize(N, budget), k, S);
}

}  // namespace lucasprod
