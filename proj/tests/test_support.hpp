#ifndef PAIROPT_TESTS_TEST_SUPPORT_HPP
#define PAIROPT_TESTS_TEST_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "pairopt/pairopt.hpp"

namespace pairopt::testing {

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)) + 1e-15;
}

inline CompatibilityMatrix uniform_matrix(std::size_t n, std::uint64_t seed) {
  return generate(n, Distribution::Uniform01, mix_seed({0x7e57ULL, n, seed}));
}

/// The 4-element matrix with C(1,2)=5, C(3,4)=7 (1-based) and zeros elsewhere.
inline CompatibilityMatrix five_seven() {
  return CompatibilityMatrix::from_fn(4, [](std::size_t i, std::size_t j) {
    if (i == 0 && j == 1) return 5.0;
    if (i == 2 && j == 3) return 7.0;
    return 0.0;
  });
}

/// Adds t to every off-diagonal entry of row/column `k`.
inline CompatibilityMatrix add_row_pattern(const CompatibilityMatrix& c, std::size_t k, double t) {
  return CompatibilityMatrix::from_fn(c.size(), [&](std::size_t i, std::size_t j) {
    return c(i, j) + ((i == k || j == k) ? t : 0.0);
  });
}

/// Total of every pairing, in enumeration order.
inline std::vector<double> all_totals(const CompatibilityMatrix& c) {
  std::vector<double> out;
  for_each_pairing(c.size(), [&](const Pairing& p) { out.push_back(total_compatibility(p, c)); });
  return out;
}

/// Equivalence by definition: identical totals for every pairing.
inline bool equivalent_by_enumeration(const CompatibilityMatrix& a, const CompatibilityMatrix& b,
                                      double rel_tol) {
  const auto ta = all_totals(a);
  const auto tb = all_totals(b);
  for (std::size_t k = 0; k < ta.size(); ++k) {
    if (!rel_close(ta[k], tb[k], rel_tol)) return false;
  }
  return true;
}

/// Half the Frobenius inner product of the dense pairing matrix S and C.
inline double half_frobenius(const Pairing& p, const CompatibilityMatrix& c) {
  const std::size_t n = c.size();
  const auto dense = c.dense();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double sij = p.partner(i) == j ? 1.0 : 0.0;
      s += sij * dense[i * n + j];
    }
  }
  return s / 2.0;
}

}  // namespace pairopt::testing

#endif  // PAIROPT_TESTS_TEST_SUPPORT_HPP
