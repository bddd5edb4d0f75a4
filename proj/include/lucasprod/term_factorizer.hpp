#pragma once

// Factorizations of Lucas terms U_n, memoized per index.
//
// U_d | U_n whenever d | n, so the primes of U_{n/q} (q a prime divisor of n)
// are divided out of U_n before any rho work. What remains is essentially the
// primitive part, which is much smaller than U_n.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <span>
#include <thread>
#include <vector>

#include "lucasprod/factoring.hpp"
#include "lucasprod/lucas.hpp"

namespace lucasprod {

/// Distinct prime divisors of a machine integer, ascending.
inline std::vector<std::uint64_t> small_prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// All positive divisors of n, ascending.
inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    if (d != n / d) out.push_back(n / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

class TermFactorizer {
 public:
  TermFactorizer(LucasParams params, Factorizer factorizer)
      : params_(params), factorizer_(factorizer) {}

  const LucasParams& params() const { return params_; }
  const Factorizer& factorizer() const { return factorizer_; }

  /// Factorization of U_n for n >= 1; may be partial if the budget runs out.
  Factorization factor(std::uint64_t n) {
    if (n == 0) throw Error(ErrorKind::ZeroInput, "U_0 = 0 has no factorization");
    {
      std::lock_guard lock(mutex_);
      if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    }
    std::set<BigInt> hint_set;
    for (std::uint64_t q : small_prime_divisors(n)) {
      if (n / q < 2) continue;
      const Factorization sub = factor(n / q);
      for (const auto& [p, e] : sub.factors) hint_set.insert(p);
    }
    const std::vector<BigInt> hints(hint_set.begin(), hint_set.end());
    Factorization f = factorizer_.factorize(lucas_u(params_, n), hints);
    std::lock_guard lock(mutex_);
    return memo_.emplace(n, std::move(f)).first->second;
  }

  /// Like factor(), but raises IncompleteFactorization naming n.
  Factorization factor_complete(std::uint64_t n) {
    Factorization f = factor(n);
    require_complete(f, static_cast<long>(n));
    return f;
  }

  /// Factors several indices on up to `jobs` threads. Results are in input order.
  std::vector<Factorization> factor_all(std::span<const std::uint64_t> indices, unsigned jobs = 1) {
    std::vector<Factorization> out(indices.size());
    if (jobs <= 1 || indices.size() < 2) {
      for (std::size_t i = 0; i < indices.size(); ++i) out[i] = factor(indices[i]);
      return out;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    {
      std::vector<std::jthread> workers;
      const unsigned count = std::min<unsigned>(jobs, static_cast<unsigned>(indices.size()));
      for (unsigned w = 0; w < count; ++w) {
        workers.emplace_back([&] {
          for (std::size_t i = next++; i < indices.size(); i = next++) {
            try {
              out[i] = factor(indices[i]);
            } catch (...) {
              std::lock_guard lock(error_mutex);
              if (!error) error = std::current_exception();
            }
          }
        });
      }
    }
    if (error) std::rethrow_exception(error);
    return out;
  }

 private:
  LucasParams params_;
  Factorizer factorizer_;
  std::mutex mutex_;
  std::map<std::uint64_t, Factorization> memo_;
};

}  // namespace lucasprod
