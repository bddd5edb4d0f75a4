#pragma once

// Exact factorization of big integers and the quantities built on it:
// valuations, radicals and k-th-power-free decompositions.
//
// Pipeline: hint primes, trial division below 10^5, perfect-power
// detection, then Brent's variant of Pollard rho with restarts. Primality is
// deterministic Miller-Rabin below 2^64 and 40 random-base rounds above.

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lucasprod/bigint.hpp"
#include "lucasprod/error.hpp"

namespace lucasprod {

inline constexpr std::uint32_t kTrialDivisionBound = 100000;
inline constexpr std::uint64_t kDefaultRhoBudget = 100000000;
inline constexpr int kProbablePrimeRounds = 40;

namespace detail {

inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kTrialDivisionBound + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= kTrialDivisionBound; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j <= kTrialDivisionBound; j += i) {
        composite[j] = true;
      }
    }
    return out;
  }();
  return primes;
}

// One strong-probable-prime round for odd n > 3, n - 1 = d * 2^s.
inline bool miller_rabin_round(const BigInt& n, const BigInt& n_minus_1, const BigInt& d,
                               unsigned long s, const BigInt& base) {
  BigInt a = base % n;
  if (a == 0) return true;
  BigInt x;
  mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long r = 1; r < s; ++r) {
    mpz_powm_ui(x.get_mpz_t(), x.get_mpz_t(), 2, n.get_mpz_t());
    if (x == n_minus_1) return true;
    if (x == 1) return false;
  }
  return false;
}

}  // namespace detail

/// Primality: deterministic below 2^64, 40 Miller-Rabin rounds with
/// reproducible random bases above.
inline bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  for (std::uint32_t p : detail::small_primes()) {
    if (n == p) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) return false;
    if (p > 1000) break;
  }
  if (n < 1000UL * 1000UL) return true;

  BigInt n_minus_1 = n - 1;
  BigInt d = n_minus_1;
  unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);

  if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
    static constexpr std::array<unsigned long, 7> kBases = {
        2UL, 325UL, 9375UL, 28178UL, 450775UL, 9780504UL, 1795265022UL};
    for (unsigned long b : kBases) {
      if (!detail::miller_rabin_round(n, n_minus_1, d, s, BigInt(b))) return false;
    }
    return true;
  }

  if (!detail::miller_rabin_round(n, n_minus_1, d, s, BigInt(2))) return false;
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(0x5eed1234UL);
  const BigInt range = n - 3;
  for (int round = 0; round < kProbablePrimeRounds; ++round) {
    BigInt base = rng.get_z_range(range) + 2;
    if (!detail::miller_rabin_round(n, n_minus_1, d, s, base)) return false;
  }
  return true;
}

/// Signed prime-exponent map. cofactor == 1 iff the factorization is complete;
/// otherwise it is the product of the composites left unsplit.
struct Factorization {
  int sign = 1;
  std::map<BigInt, unsigned long> factors;
  BigInt cofactor = 1;

  bool complete() const { return cofactor == 1; }

  BigInt value() const {
    BigInt v = cofactor;
    for (const auto& [p, e] : factors) v *= pow(p, e);
    return sign < 0 ? BigInt(-v) : v;
  }

  unsigned long exponent(const BigInt& p) const {
    auto it = factors.find(p);
    return it == factors.end() ? 0 : it->second;
  }

  void add(const BigInt& p, unsigned long e) {
    if (e > 0) factors[p] += e;
  }

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

namespace detail {

// Brent's cycle-finding rho for x -> x^2 + c. Consumes from `budget`.
inline std::optional<BigInt> brent_rho(const BigInt& n, unsigned long c, std::uint64_t& budget) {
  constexpr std::uint64_t kBatch = 128;
  BigInt y = 2 + c;
  BigInt x, ys;
  BigInt q = 1;
  BigInt g = 1;
  BigInt diff;
  auto step = [&](BigInt& v) {
    mpz_mul(v.get_mpz_t(), v.get_mpz_t(), v.get_mpz_t());
    mpz_add_ui(v.get_mpz_t(), v.get_mpz_t(), c);
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
  };
  std::uint64_t r = 1;
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) step(y);
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      const std::uint64_t run = std::min(kBatch, r - k);
      if (budget < run) {
        budget = 0;
        return std::nullopt;
      }
      budget -= run;
      for (std::uint64_t i = 0; i < run; ++i) {
        step(y);
        diff = x - y;
        mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
        mpz_mul(q.get_mpz_t(), q.get_mpz_t(), diff.get_mpz_t());
        mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += run;
    }
    r *= 2;
  }
  if (g == n) {
    // batch overshot: replay one step at a time from the saved point
    do {
      step(ys);
      diff = x - ys;
      mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
      mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  if (g == n) return std::nullopt;
  return g;
}

// Splits a composite n into a nontrivial factor, or nullopt if the budget runs out.
inline std::optional<BigInt> split_composite(const BigInt& n, std::uint64_t budget) {
  for (unsigned long c = 1; budget > 0; ++c) {
    if (auto d = brent_rho(n, c, budget)) return d;
  }
  return std::nullopt;
}

}  // namespace detail

/// Factors N != 0. Primes in `hints` are divided out first. Each composite
/// met during splitting gets `budget` rho iterations before it is given up
/// and left in the cofactor.
inline Factorization factorize(const BigInt& N, std::uint64_t budget = kDefaultRhoBudget,
                               std::span<const BigInt> hints = {}) {
  if (N == 0) throw Error(ErrorKind::ZeroInput, "cannot factor 0");
  Factorization result;
  result.sign = sign(N) < 0 ? -1 : 1;
  BigInt rest = abs_value(N);

  for (const BigInt& p : hints) {
    if (rest == 1) break;
    if (p < 2) continue;
    unsigned long e = mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
    result.add(p, e);
  }

  for (std::uint32_t p : detail::small_primes()) {
    if (rest == 1) break;
    if (rest < BigInt(static_cast<unsigned long>(p)) * p) break;
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p) == 0) continue;
    unsigned long e = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++e;
    }
    result.add(BigInt(static_cast<unsigned long>(p)), e);
  }

  // (value, multiplicity) work list
  std::vector<std::pair<BigInt, unsigned long>> pending;
  if (rest > 1) pending.emplace_back(rest, 1);
  while (!pending.empty()) {
    auto [n, mult] = std::move(pending.back());
    pending.pop_back();
    if (n == 1) continue;
    if (is_prime(n)) {
      result.add(n, mult);
      continue;
    }
    if (mpz_perfect_power_p(n.get_mpz_t()) != 0) {
      // largest exponent first so the root is as small as possible
      bool split = false;
      for (unsigned long k = mpz_sizeinbase(n.get_mpz_t(), 2); k >= 2; --k) {
        if (auto root = exact_root(n, k)) {
          pending.emplace_back(*root, mult * k);
          split = true;
          break;
        }
      }
      if (split) continue;
    }
    if (auto d = detail::split_composite(n, budget)) {
      BigInt other = n / *d;
      // pull shared factors apart so each piece is handled once
      BigInt g = gcd(*d, other);
      if (g > 1) {
        pending.emplace_back(g, mult);
        pending.emplace_back(*d / g, mult);
        pending.emplace_back(other, mult);
      } else {
        pending.emplace_back(*d, mult);
        pending.emplace_back(other, mult);
      }
    } else {
      result.cofactor *= pow(n, mult);
    }
  }
  // merging can leave composite keys only if hints were composite; reject those
  for (const auto& [p, e] : result.factors) {
    if (!is_prime(p)) throw Error(ErrorKind::NotPrime, "hint " + to_string(p) + " is not prime");
  }
  return result;
}

inline void require_complete(const Factorization& f, long index = -1) {
  if (!f.complete()) throw IncompleteFactorizationError(f.cofactor, index);
}

/// Largest t with p^t | N.
inline unsigned long valuation(const BigInt& N, const BigInt& p) {
  if (N == 0) throw Error(ErrorKind::ZeroInput, "valuation of 0 is undefined");
  if (!is_prime(p)) throw Error(ErrorKind::NotPrime, to_string(p) + " is not prime");
  BigInt rest = N;
  return mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
}

inline BigInt radical(const Factorization& f) {
  require_complete(f);
  BigInt r = 1;
  for (const auto& [p, e] : f.factors) r *= p;
  return r;
}

inline BigInt radical(const BigInt& N, std::uint64_t budget = kDefaultRhoBudget) {
  return radical(factorize(N, budget));
}

/// N = e * s^k with e k-th-power-free and carrying the sign of N, s >= 1.
struct PowerFreeDecomposition {
  unsigned long k = 2;
  BigInt e = 1;
  BigInt s = 1;
};

inline PowerFreeDecomposition power_free_part(const Factorization& f, unsigned long k) {
  if (k < 2) throw Error(ErrorKind::InvalidArgument, "k must be at least 2");
  require_complete(f);
  PowerFreeDecomposition d{k, BigInt(f.sign), 1};
  for (const auto& [p, e] : f.factors) {
    if (e % k != 0) d.e *= pow(p, e % k);
    if (e / k != 0) d.s *= pow(p, e / k);
  }
  return d;
}

inline PowerFreeDecomposition power_free_part(const BigInt& N, unsigned long k,
                                              std::uint64_t budget = kDefaultRhoBudget) {
  return power_free_part(factorize(N, budget), k);
}

/// Append-only persistent store of complete factorizations.
///
/// One record per line: `N <sign> p1^e1 p2^e2 ...` with sign `+` or `-`.
/// Lines that fail to parse or do not reconstruct N are skipped on load.
class FactorCache {
 public:
  FactorCache() = default;

  explicit FactorCache(std::string path) : path_(std::move(path)) { load(); }

  FactorCache(const FactorCache&) = delete;
  FactorCache& operator=(const FactorCache&) = delete;

  const std::string& path() const { return path_; }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
  }

  std::size_t skipped_lines() const { return skipped_; }

  std::optional<Factorization> find(const BigInt& n) const {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(to_string(n));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  /// Records a complete factorization of n; incomplete ones are ignored.
  void store(const BigInt& n, const Factorization& f) {
    if (!f.complete()) return;
    std::lock_guard lock(mutex_);
    std::string key = to_string(n);
    if (!entries_.emplace(key, f).second) return;
    if (path_.empty()) return;
    std::ofstream out(path_, std::ios::app);
    if (!out) throw Error(ErrorKind::CacheIo, "cannot append to " + path_);
    out << format_record(n, f) << '\n';
  }

  static std::string format_record(const BigInt& n, const Factorization& f) {
    std::ostringstream line;
    line << to_string(n) << ' ' << (f.sign < 0 ? '-' : '+');
    for (const auto& [p, e] : f.factors) line << ' ' << to_string(p) << '^' << e;
    return line.str();
  }

  static std::optional<std::pair<BigInt, Factorization>> parse_record(const std::string& line) {
    std::istringstream in(line);
    std::string n_text, sign_text;
    if (!(in >> n_text >> sign_text)) return std::nullopt;
    auto n = parse_bigint(n_text);
    if (!n || *n == 0 || (sign_text != "+" && sign_text != "-")) return std::nullopt;
    Factorization f;
    f.sign = sign_text == "-" ? -1 : 1;
    std::string item;
    while (in >> item) {
      auto caret = item.find('^');
      if (caret == std::string::npos) return std::nullopt;
      auto p = parse_bigint(item.substr(0, caret));
      auto e = parse_bigint(item.substr(caret + 1));
      if (!p || !e || *p < 2 || *e < 1 || !e->fits_ulong_p()) return std::nullopt;
      f.add(*p, e->get_ui());
    }
    if (f.value() != *n) return std::nullopt;
    return std::make_pair(std::move(*n), std::move(f));
  }

 private:
  void load() {
    std::ifstream in(path_);
    if (!in) return;  // a missing file is an empty cache
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (auto rec = parse_record(line)) {
        entries_.emplace(to_string(rec->first), std::move(rec->second));
      } else {
        ++skipped_;
      }
    }
  }

  std::string path_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, Factorization> entries_;
  std::size_t skipped_ = 0;
};

/// Budgeted factorization with an optional shared cache.
class Factorizer {
 public:
  explicit Factorizer(std::uint64_t budget = kDefaultRhoBudget, FactorCache* cache = nullptr)
      : budget_(budget), cache_(cache) {}

  std::uint64_t budget() const { return budget_; }
  FactorCache* cache() const { return cache_; }

  Factorization factorize(const BigInt& n, std::span<const BigInt> hints = {}) const {
    if (cache_ != nullptr) {
      if (auto hit = cache_->find(n)) return *hit;
    }
    Factorization f = lucasprod::factorize(n, budget_, hints);
    if (cache_ != nullptr && f.complete()) cache_->store(n, f);
    return f;
  }

  Factorization factorize_complete(const BigInt& n, long index = -1) const {
    Factorization f = factorize(n);
    require_complete(f, index);
    return f;
  }

 private:
  std::uint64_t budget_;
  FactorCache* cache_;
};

}  // namespace lucasprod
