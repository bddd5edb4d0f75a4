#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include "lucasprod/factoring.hpp"
#include "oracles.hpp"

namespace lucasprod {
namespace {

std::map<BigInt, unsigned long> as_map(const Factorization& f) { return {f.factors.begin(), f.factors.end()}; }

TEST(Factorize, Examples) {
  auto f = factorize(144);
  EXPECT_EQ(f.sign, 1);
  EXPECT_TRUE(f.complete());
  EXPECT_EQ(as_map(f), oracle::trial_factor(144));
  EXPECT_EQ(as_map(f), (std::map<BigInt, unsigned long>{{2, 4}, {3, 2}}));

  f = factorize(-45);
  EXPECT_EQ(f.sign, -1);
  EXPECT_EQ(as_map(f), oracle::trial_factor(45));

  f = factorize(1);
  EXPECT_EQ(f.sign, 1);
  EXPECT_TRUE(f.factors.empty());
  EXPECT_TRUE(f.complete());

  EXPECT_THROW(factorize(0), Error);
}

TEST(Factorize, MatchesTrialDivisionOnSmallInputs) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const long v = static_cast<long>(rng() % 2000000000ULL) + 1;
    const BigInt n = (i % 2 == 0) ? BigInt(v) : BigInt(-v);
    const auto f = factorize(n);
    ASSERT_TRUE(f.complete());
    ASSERT_EQ(as_map(f), oracle::trial_factor(n)) << to_string(n);
  }
}

TEST(Factorize, SplitsLargeSemiprimeAndPowers) {
  const BigInt p("743519377"), q("770857978613");
  auto f = factorize(p * q);
  EXPECT_TRUE(f.complete());
  EXPECT_EQ(f.exponent(p), 1u);
  EXPECT_EQ(f.exponent(q), 1u);

  f = factorize(pow(q, 3) * pow(p, 2) * 12);
  EXPECT_TRUE(f.complete());
  EXPECT_EQ(f.exponent(q), 3u);
  EXPECT_EQ(f.exponent(p), 2u);
  EXPECT_EQ(f.exponent(2), 2u);
}

TEST(Factorize, BudgetExhaustionLeavesComposite) {
  const BigInt p("743519377"), q("770857978613");
  const auto f = factorize(p * q * 10, 0);
  EXPECT_FALSE(f.complete());
  EXPECT_EQ(f.cofactor, p * q);
  EXPECT_EQ(f.value(), p * q * 10);
  EXPECT_THROW(radical(f), IncompleteFactorizationError);
  EXPECT_THROW(power_free_part(f, 2), IncompleteFactorizationError);
}

TEST(Factorize, HintsAreUsed) {
  const BigInt p("743519377"), q("770857978613");
  const std::vector<BigInt> hints = {p};
  const auto f = factorize(p * q * p, 0, hints);
  EXPECT_TRUE(f.complete());
  EXPECT_EQ(f.exponent(p), 2u);
  EXPECT_EQ(f.exponent(q), 1u);
}

TEST(Factorize, RoundTripRandom256Bit) {
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(20240501UL);
  for (int i = 0; i < 1000; ++i) {
    BigInt n = rng.get_z_bits(1 + (i % 256)) + 1;
    if (i % 3 == 0) n = -n;
    const auto f = factorize(n, 2000);
    ASSERT_EQ(f.value(), n);
    for (const auto& [p, e] : f.factors) {
      ASSERT_TRUE(is_prime(p));
      ASSERT_GE(e, 1u);
    }
    if (!f.complete()) ASSERT_FALSE(is_prime(f.cofactor));
  }
}

TEST(IsPrime, AgreesWithSieveAndKnownCases) {
  for (long n = -5; n < 20000; ++n) {
    ASSERT_EQ(is_prime(n), n > 1 && oracle::trial_factor(n).size() == 1 &&
                               oracle::trial_factor(n).begin()->second == 1)
        << n;
  }
  EXPECT_TRUE(is_prime(BigInt("2305843009213693951")));                     // 2^61-1
  EXPECT_TRUE(is_prime(BigInt("618970019642690137449562111")));             // 2^89-1
  EXPECT_TRUE(is_prime(BigInt("170141183460469231731687303715884105727")));  // 2^127-1
  EXPECT_FALSE(is_prime(561));
  EXPECT_FALSE(is_prime(BigInt("3215031751")));  // strong pseudoprime to 2,3,5,7
  EXPECT_FALSE(is_prime(BigInt("3825123056546413051")));
  EXPECT_FALSE(is_prime(BigInt("618970019642690137449562111") * BigInt("2305843009213693951")));
}

TEST(Valuation, Examples) {
  EXPECT_EQ(valuation(144, 2), oracle::repeated_division(144, 2));
  EXPECT_EQ(valuation(144, 2), 4u);
  EXPECT_EQ(valuation(144, 5), 0u);
  EXPECT_EQ(valuation(1, 7), 0u);
  EXPECT_EQ(valuation(-1000, 5), 3u);
  EXPECT_THROW(valuation(0, 2), Error);
  EXPECT_THROW(valuation(144, 4), Error);
}

TEST(Radical, Examples) {
  EXPECT_EQ(radical(BigInt(8)), 2);
  EXPECT_EQ(radical(BigInt(144)), 6);
  EXPECT_EQ(radical(BigInt(-1)), 1);
  EXPECT_EQ(radical(BigInt(-90)), 30);
}

TEST(PowerFreePart, Examples) {
  auto d = power_free_part(BigInt(144), 2);
  EXPECT_EQ(d.e, 1);
  EXPECT_EQ(d.s, 12);
  d = power_free_part(BigInt(8), 2);
  EXPECT_EQ(d.e, 2);
  EXPECT_EQ(d.s, 2);
  d = power_free_part(BigInt(144), 3);
  EXPECT_EQ(d.e, 18);
  EXPECT_EQ(d.s, 2);
  d = power_free_part(BigInt(-45), 2);
  EXPECT_EQ(d.e, -5);
  EXPECT_EQ(d.s, 3);
  EXPECT_THROW(power_free_part(BigInt(8), 1), Error);
}

// brute force: largest s with s^k | n
long largest_power_divisor_root(long n, unsigned long k) {
  long best = 1;
  for (long s = 2;; ++s) {
    long pw = 1;
    bool over = false;
    for (unsigned long i = 0; i < k; ++i) {
      pw *= s;
      if (pw > std::labs(n)) {
        over = true;
        break;
      }
    }
    if (over) break;
    if (n % pw == 0) best = s;
  }
  return best;
}

TEST(PowerFreePart, UniqueAndMaximalBruteForce) {
  std::mt19937 rng(11);
  for (int i = 0; i < 400; ++i) {
    long n = static_cast<long>(rng() % 1000000) + 1;
    if (i % 2) n = -n;
    for (unsigned long k : {2UL, 3UL, 5UL}) {
      const auto d = power_free_part(BigInt(n), k);
      ASSERT_EQ(d.e * pow(d.s, k), n);
      ASSERT_EQ(sign(d.e), n < 0 ? -1 : 1);
      ASSERT_EQ(largest_power_divisor_root(d.e.get_si(), k), 1) << n << " k=" << k;
      ASSERT_EQ(d.s, largest_power_divisor_root(n, k)) << n << " k=" << k;
    }
  }
}

TEST(PowerFreePart, SquarefreeIdempotent) {
  std::mt19937 rng(5);
  for (int i = 0; i < 300; ++i) {
    const BigInt n = BigInt(static_cast<long>(rng() % 10000000)) - 5000000;
    if (n == 0) continue;
    const auto e = power_free_part(n, 2).e;
    ASSERT_EQ(power_free_part(e, 2).e, e);
  }
}

class CacheTest : public ::testing::Test {
 protected:
  void SetUp() override {
    path_ = (std::filesystem::temp_directory_path() /
             ("lucasprod_cache_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
              "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name() + ".txt"))
                .string();
    std::filesystem::remove(path_);
  }
  void TearDown() override { std::filesystem::remove(path_); }
  std::string path_;
};

TEST_F(CacheTest, StoresAndReloads) {
  const BigInt n = BigInt("743519377") * BigInt("770857978613") * -12;
  {
    FactorCache cache(path_);
    Factorizer factorizer(kDefaultRhoBudget, &cache);
    const auto f = factorizer.factorize(n);
    EXPECT_TRUE(f.complete());
    EXPECT_EQ(cache.size(), 1u);
  }
  std::ifstream in(path_);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, to_string(n) + " - 2^2 3^1 743519377^1 770857978613^1");

  FactorCache reloaded(path_);
  EXPECT_EQ(reloaded.size(), 1u);
  auto hit = reloaded.find(n);
  ASSERT_TRUE(hit.has_value());
  EXPECT_EQ(hit->value(), n);
  // a zero budget still succeeds because the cache answers first
  Factorizer cached_only(0, &reloaded);
  EXPECT_TRUE(cached_only.factorize(n).complete());
}

TEST_F(CacheTest, SkipsMalformedAndInconsistentLines) {
  {
    std::ofstream out(path_);
    out << "144 + 2^4 3^2\n";
    out << "garbage\n";
    out << "145 + 2^4 3^2\n";  // does not reconstruct
    out << "-8 - 2^3\n";
    out << "9 + 3^x\n";
  }
  FactorCache cache(path_);
  EXPECT_EQ(cache.size(), 2u);
  EXPECT_EQ(cache.skipped_lines(), 3u);
  EXPECT_TRUE(cache.find(-8).has_value());
  EXPECT_FALSE(cache.find(145).has_value());
}

TEST_F(CacheTest, IncompleteResultsAreNotStored) {
  FactorCache cache(path_);
  Factorizer factorizer(0, &cache);
  const auto f = factorizer.factorize(BigInt("743519377") * BigInt("770857978613"));
  EXPECT_FALSE(f.complete());
  EXPECT_EQ(cache.size(), 0u);
}

TEST_F(CacheTest, ConcurrentWritersProduceWholeLines) {
  {
    FactorCache cache(path_);
    std::vector<std::jthread> threads;
    for (int t = 0; t < 4; ++t) {
      threads.emplace_back([&cache, t] {
        Factorizer factorizer(kDefaultRhoBudget, &cache);
        for (long v = 2; v < 400; ++v) factorizer.factorize(BigInt(v * 1000 + t));
      });
    }
  }
  FactorCache reloaded(path_);
  EXPECT_EQ(reloaded.skipped_lines(), 0u);
  EXPECT_EQ(reloaded.size(), 4u * 398u);
}

}  // namespace
}  // namespace lucasprod
