// Solves 5 y^2 = F_m F_n with coprime indices up to 50 and prints the
// certificates, then the quality of the Binet triple for F_12 = 12^2.

#include <iostream>

#include "lucasprod.hpp"

int main() {
  using namespace lucasprod;
  const LucasParams fib = validate_params(1, 1);
  TermFactorizer terms(fib, Factorizer{});
  const ProductEquation eq = make_equation(fib, 5, 2, 50, 2);

  for (const auto& cert : enumerate_solutions(eq, terms)) {
    std::cout << "indices:";
    for (auto n : cert.indices) std::cout << ' ' << n;
    std::cout << "  y = " << to_string(cert.y) << '\n';
  }

  const QualityReport r = quality_report(terms, 12, 2);
  std::cout << "F_12: height " << r.height << ", radical " << r.radical << ", quality "
            << r.quality.value_or(0.0) << '\n';
}
