#include <gtest/gtest.h>

#include "lucasprod/primitive.hpp"
#include "lucasprod/solver.hpp"
#include "oracles.hpp"

namespace lucasprod {
namespace {

using Indices = std::vector<std::uint64_t>;

// admissibility by full trial-division factorization of U_n
Indices factoring_oracle_admissible(long P, long Q, const BigInt& A, unsigned long k, std::uint64_t N) {
  const auto U = oracle::sequence(P, Q, N + 1);
  const auto support = oracle::trial_factor(A);
  Indices out;
  for (std::uint64_t n = 2; n <= N; ++n) {
    bool ok = true;
    for (const auto& [p, e] : oracle::trial_factor(U[n])) {
      if (e % k != 0 && support.count(p) == 0) ok = false;
    }
    if (ok) out.push_back(n);
  }
  return out;
}

struct Fixture {
  Fixture(long P, long Q) : params(validate_params(P, Q)), terms(params, Factorizer{}) {}
  LucasParams params;
  TermFactorizer terms;
};

std::vector<Indices> index_sets(const std::vector<SolutionCertificate>& certs) {
  std::vector<Indices> out;
  for (const auto& c : certs) out.push_back(c.indices);
  return out;
}

TEST(Admissible, FibonacciA5) {
  Fixture fx(1, 1);
  const auto eq = make_equation(fx.params, 5, 2, 50, 2);
  const auto set = admissible_indices(eq, Factorizer{});
  EXPECT_EQ(set.indices, factoring_oracle_admissible(1, 1, 5, 2, 50));
  EXPECT_EQ(set.indices, (Indices{2, 5, 12}));
  for (std::uint64_t bad : {3, 4, 6}) {
    EXPECT_EQ(std::count(set.indices.begin(), set.indices.end(), bad), 0);
  }
}

TEST(Admissible, PellTypeA8) {
  Fixture fx(2, 1);
  const auto set = admissible_indices(make_equation(fx.params, 8, 2, 10, 2), Factorizer{});
  EXPECT_EQ(set.indices, factoring_oracle_admissible(2, 1, 8, 2, 10));
  EXPECT_TRUE(std::count(set.indices.begin(), set.indices.end(), 2));
  EXPECT_FALSE(std::count(set.indices.begin(), set.indices.end(), 3));
  EXPECT_FALSE(std::count(set.indices.begin(), set.indices.end(), 5));
}

TEST(Admissible, UnitCoefficientIsSignedSquareScan) {
  for (auto [P, Q] : std::vector<std::pair<long, long>>{{1, 1}, {2, 1}, {3, -1}, {-1, 1}}) {
    const auto U = oracle::sequence(P, Q, 31);
    Indices squares;
    for (std::uint64_t n = 2; n <= 30; ++n) {
      if (oracle::is_kth_power(U[n], 2)) squares.push_back(n);
    }
    const auto params = validate_params(P, Q);
    for (long A : {1L, -1L}) {
      EXPECT_EQ(admissible_indices(make_equation(params, A, 2, 30, 1), Factorizer{}).indices, squares)
          << P << "," << Q << " A=" << A;
    }
  }
}

TEST(Admissible, AgreesWithFactoringOracleAcrossCases) {
  for (auto [P, Q] : std::vector<std::pair<long, long>>{{1, 1}, {2, 1}, {3, -1}, {-1, 1}}) {
    for (long A : {1L, 2L, 3L, 5L, 8L, 12L, -30L}) {
      for (unsigned long k : {2UL, 3UL}) {
        const auto eq = make_equation(validate_params(P, Q), A, k, 40, 1);
        ASSERT_EQ(admissible_indices(eq, Factorizer{}).indices,
                  factoring_oracle_admissible(P, Q, A, k, 40))
            << P << "," << Q << " A=" << A << " k=" << k;
      }
    }
  }
}

TEST(MakeEquation, Validation) {
  const auto fib = validate_params(1, 1);
  EXPECT_THROW(make_equation(fib, 0, 2, 10, 1), Error);
  EXPECT_THROW(make_equation(fib, 1, 1, 10, 1), Error);
  EXPECT_THROW(make_equation(fib, 1, 2, 1, 1), Error);
  EXPECT_THROW(make_equation(fib, 1, 2, 10, 0), Error);
  EXPECT_THROW(make_equation(fib, 1, 2, kDefaultIndexCap + 1, 1), Error);
}

TEST(Enumerate, FibonacciA5) {
  Fixture fx(1, 1);
  const auto eq = make_equation(fx.params, 5, 2, 50, 2);
  const auto certs = enumerate_solutions(eq, fx.terms);
  EXPECT_EQ(index_sets(certs), (std::vector<Indices>{{2, 5}, {5}, {5, 12}}));
  EXPECT_EQ(certs[0].y, 1);
  EXPECT_EQ(certs[1].y, 1);
  EXPECT_EQ(certs[2].y, 12);
  EXPECT_EQ(5 * certs[2].y * certs[2].y, lucas_u(fx.params, 12) * lucas_u(fx.params, 5));
  EXPECT_FALSE(trivial_solution(eq).has_value());
}

TEST(Enumerate, FibonacciCubes) {
  Fixture fx(1, 1);
  const auto eq = make_equation(fx.params, 1, 3, 50, 1);
  const auto certs = enumerate_solutions(eq, fx.terms);
  EXPECT_EQ(index_sets(certs), (std::vector<Indices>{{2}, {6}}));
  EXPECT_EQ(certs[0].y, 1);
  EXPECT_EQ(certs[1].y, 2);
  ASSERT_TRUE(trivial_solution(eq).has_value());
  EXPECT_TRUE(trivial_solution(eq)->trivial);
}

TEST(Enumerate, FibonacciA7HasNoSolutions) {
  Fixture fx(1, 1);
  const auto eq = make_equation(fx.params, 7, 2, 40, 2);
  EXPECT_TRUE(enumerate_solutions(eq, fx.terms).empty());
  EXPECT_TRUE(oracle::brute_solutions(1, 1, 7, 2, 40, 2).empty());
}

TEST(Enumerate, OddKAcceptsNegativeQuotient) {
  Fixture fx(-1, 1);  // U_2 = -1
  const auto certs = enumerate_solutions(make_equation(fx.params, 1, 3, 30, 1), fx.terms);
  ASSERT_FALSE(certs.empty());
  EXPECT_EQ(certs[0].indices, (Indices{2}));
  EXPECT_EQ(certs[0].y, -1);
  const auto expected = oracle::brute_solutions(-1, 1, 1, 3, 30, 2);
  const auto got = enumerate_solutions(make_equation(fx.params, 1, 3, 30, 2), fx.terms);
  ASSERT_EQ(got.size(), expected.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_EQ(got[i].indices, expected[i].indices);
    EXPECT_EQ(got[i].y, expected[i].y);
  }
}

TEST(Enumerate, ParallelFactoringGivesSameResult) {
  Fixture serial(1, 1);
  Fixture parallel(1, 1);
  const auto eq = make_equation(serial.params, 5, 2, 120, 3);
  EXPECT_EQ(enumerate_solutions(eq, serial.terms), enumerate_solutions(eq, parallel.terms, 4));
}

TEST(Enumerate, TrivialSolution) {
  const auto fib = validate_params(1, 1);
  EXPECT_TRUE(trivial_solution(make_equation(fib, 1, 2, 10, 1)).has_value());
  EXPECT_FALSE(trivial_solution(make_equation(fib, -1, 2, 10, 1)).has_value());
  const auto odd = trivial_solution(make_equation(fib, -1, 3, 10, 1));
  ASSERT_TRUE(odd.has_value());
  EXPECT_EQ(odd->y, -1);
  EXPECT_FALSE(trivial_solution(make_equation(fib, 5, 3, 10, 1)).has_value());
}

// Exhaustive comparison with the unpruned oracle, plus certificate checks.
TEST(Enumerate, MatchesBruteForceAtDeskScale) {
  for (auto [P, Q] : std::vector<std::pair<long, long>>{{1, 1}, {2, 1}}) {
    Fixture fx(P, Q);
    const long delta = fx.params.delta;
    for (long A : {1L, -1L, delta, 5 * delta}) {
      for (unsigned r = 1; r <= 3; ++r) {
        const auto eq = make_equation(fx.params, A, 2, 30, r);
        const auto certs = enumerate_solutions(eq, fx.terms);
        const auto expected = oracle::brute_solutions(P, Q, A, 2, 30, r);
        ASSERT_EQ(certs.size(), expected.size()) << P << "," << Q << " A=" << A << " r=" << r;
        const auto Af = factorize(A);
        for (std::size_t i = 0; i < certs.size(); ++i) {
          EXPECT_EQ(certs[i].indices, expected[i].indices);
          EXPECT_EQ(certs[i].y, expected[i].y);
          EXPECT_TRUE(certificate_violations(eq, certs[i], Af).empty());
          // soundness: re-verification reproduces the certificate
          auto again = verify_solution(eq, certs[i].indices, fx.terms);
          ASSERT_TRUE(std::holds_alternative<SolutionCertificate>(again));
          EXPECT_EQ(std::get<SolutionCertificate>(again), certs[i]);
          // pruning never drops an index that occurs in a real solution
          const auto adm = admissible_indices(eq, Af).indices;
          for (auto n : expected[i].indices) {
            EXPECT_TRUE(std::binary_search(adm.begin(), adm.end(), n));
          }
        }
      }
    }
  }
}

TEST(Verify, FibonacciCertificate) {
  Fixture fx(1, 1);
  const auto eq = make_equation(fx.params, 5, 2, 50, 2);
  auto outcome = verify_solution(eq, {5, 12}, fx.terms);
  ASSERT_TRUE(std::holds_alternative<SolutionCertificate>(outcome));
  const auto& cert = std::get<SolutionCertificate>(outcome);
  EXPECT_EQ(cert.y, 12);
  EXPECT_TRUE(cert.class_check);
  EXPECT_FALSE(cert.canonical);
  using Row = std::vector<ValuationEntry>;
  EXPECT_EQ(cert.valuations.at(2), (Row{{12, 4}}));
  EXPECT_EQ(cert.valuations.at(3), (Row{{12, 2}}));
  EXPECT_EQ(cert.valuations.at(5), (Row{{5, 1}}));
  EXPECT_EQ(oracle::repeated_division(144, 2), 4u);
  EXPECT_EQ(oracle::repeated_division(144, 3), 2u);

  // reversed order and a stripped index 1 give the same canonical tuple
  auto reordered = verify_solution(eq, {12, 1, 5}, fx.terms);
  ASSERT_TRUE(std::holds_alternative<SolutionCertificate>(reordered));
  EXPECT_EQ(std::get<SolutionCertificate>(reordered).indices, (Indices{5, 12}));
  EXPECT_TRUE(std::get<SolutionCertificate>(reordered).canonical);
}

RejectionKind rejection_of(const VerifyOutcome& outcome) {
  EXPECT_TRUE(std::holds_alternative<Rejection>(outcome));
  return std::get<Rejection>(outcome).kind;
}

TEST(Verify, Rejections) {
  Fixture fx(1, 1);
  const auto eq5 = make_equation(fx.params, 5, 2, 50, 2);

  auto out = verify_solution(eq5, {4, 5}, fx.terms);
  EXPECT_EQ(rejection_of(out), RejectionKind::ClassMismatch);
  EXPECT_EQ(std::get<Rejection>(out).indices, (Indices{4}));

  out = verify_solution(eq5, {6, 9}, fx.terms);
  EXPECT_EQ(rejection_of(out), RejectionKind::NotPairwiseCoprime);
  EXPECT_EQ(std::get<Rejection>(out).indices, (Indices{6, 9}));

  // classes [1] but [A] = [5]
  EXPECT_EQ(rejection_of(verify_solution(eq5, {2}, fx.terms)), RejectionKind::ClassMismatch);

  // k = 3, A = 25: F_5 = 5 is supported on {5} but 25 does not divide it
  out = verify_solution(make_equation(fx.params, 25, 3, 50, 1), {5}, fx.terms);
  EXPECT_EQ(rejection_of(out), RejectionKind::NotDivisible);
  EXPECT_EQ(std::get<Rejection>(out).prime, BigInt(5));

  // k = 3, A = 2: F_6 / 2 = 4 is not a cube
  EXPECT_EQ(rejection_of(verify_solution(make_equation(fx.params, 2, 3, 50, 1), {6}, fx.terms)),
            RejectionKind::NotKthPower);

  // k = 4 and U_2(-1, 1) = -1: quotient -1 is a 4th power in absolute value only
  Fixture neg(-1, 1);
  EXPECT_EQ(rejection_of(verify_solution(make_equation(neg.params, 1, 4, 10, 1), {2}, neg.terms)),
            RejectionKind::NegativeQuotientEvenK);

  EXPECT_THROW(verify_solution(eq5, {}, fx.terms), Error);
  EXPECT_THROW(verify_solution(eq5, {0, 5}, fx.terms), Error);
}

TEST(Verify, IncompleteFactorizationNamesTheIndex) {
  const auto fib = validate_params(1, 1);
  TermFactorizer terms(fib, Factorizer{0});
  const auto eq = make_equation(fib, 1, 2, 200, 1);
  try {
    verify_solution(eq, {101}, terms);
    FAIL() << "expected IncompleteFactorizationError";
  } catch (const IncompleteFactorizationError& e) {
    EXPECT_EQ(e.index(), 101);
    EXPECT_EQ(e.cofactor(), BigInt("743519377") * BigInt("770857978613"));
  }
}

TEST(TermFactorizer, UsesDivisorTermsAndParallelAgrees) {
  const auto fib = validate_params(1, 1);
  TermFactorizer serial(fib, Factorizer{});
  TermFactorizer parallel(fib, Factorizer{});
  Indices ns;
  for (std::uint64_t n = 1; n <= 150; ++n) ns.push_back(n);
  const auto a = serial.factor_all(ns, 1);
  const auto b = parallel.factor_all(ns, 4);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    EXPECT_TRUE(a[i].complete()) << ns[i];
    EXPECT_EQ(a[i].value(), lucas_u(fib, ns[i]));
  }
  EXPECT_THROW(serial.factor(0), Error);
}

}  // namespace
}  // namespace lucasprod
