#ifndef PAIROPT_ORACLE_HPP
#define PAIROPT_ORACLE_HPP

// Exhaustive ground truth for small n: all (n-1)!! pairings, the exact
// optimum and the exact moments of the total compatibility.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pairopt/pairmat.hpp"

namespace pairopt {

/// Largest n accepted by the enumerating routines (13!! = 135135 pairings).
inline constexpr std::size_t kMaxEnumerationN = 14;
/// Largest n for which (n-1)!! is returned as an exact integer.
inline constexpr std::size_t kMaxExactCountN = 20;

namespace detail {

inline void check_even_count(std::size_t n, std::size_t max_n) {
  if (n % 2 != 0) throw Error(Errc::OddN, "n must be even, got " + std::to_string(n));
  if (n < 2) throw Error(Errc::TooSmall, "n must be at least 2, got " + std::to_string(n));
  if (n > max_n) {
    throw Error(Errc::TooLarge, "n=" + std::to_string(n) + " exceeds the limit of " +
                                    std::to_string(max_n));
  }
}

template <class Visit>
void enumerate_from(std::vector<std::size_t>& partner, std::size_t first_free, Visit& visit) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  const std::size_t n = partner.size();
  while (first_free < n && partner[first_free] != kUnset) ++first_free;
  if (first_free == n) {
    visit(Pairing(partner));
    return;
  }
  for (std::size_t j = first_free + 1; j < n; ++j) {
    if (partner[j] != kUnset) continue;
    partner[first_free] = j;
    partner[j] = first_free;
    enumerate_from(partner, first_free + 1, visit);
    partner[first_free] = kUnset;
    partner[j] = kUnset;
  }
}

}  // namespace detail

/// (n-1)!!, the number of pairings of n elements.
inline std::uint64_t pairing_count(std::size_t n) {
  detail::check_even_count(n, kMaxExactCountN);
  std::uint64_t count = 1;
  for (std::uint64_t k = n - 1; k > 1; k -= 2) count *= k;
  return count;
}

/// log10((n-1)!!), usable for any even n.
inline double log10_pairing_count(std::size_t n) {
  if (n % 2 != 0) throw Error(Errc::OddN, "n must be even, got " + std::to_string(n));
  double s = 0.0;
  for (std::size_t k = n - 1; k > 1; k -= 2) s += std::log10(static_cast<double>(k));
  return s;
}

/// Calls `visit(const Pairing&)` once per pairing. Order: the lowest unpaired
/// element takes each remaining candidate in ascending order.
template <class Visit>
void for_each_pairing(std::size_t n, Visit&& visit) {
  detail::check_even_count(n, kMaxEnumerationN);
  std::vector<std::size_t> partner(n, static_cast<std::size_t>(-1));
  detail::enumerate_from(partner, 0, visit);
}

inline std::vector<Pairing> enumerate_pairings(std::size_t n) {
  std::vector<Pairing> out;
  for_each_pairing(n, [&](const Pairing& p) { out.push_back(p); });
  return out;
}

struct Optimum {
  Pairing pairing;
  double total;
};

/// Exact maximiser; the first pairing in enumeration order wins ties.
inline Optimum brute_force_optimum(const CompatibilityMatrix& matrix) {
  detail::check_even_count(matrix.size(), kMaxEnumerationN);
  std::optional<Optimum> best;
  for_each_pairing(matrix.size(), [&](const Pairing& p) {
    const double t = total_compatibility(p, matrix);
    if (!best || t > best->total) best = Optimum{p, t};
  });
  return *best;
}

struct EnumeratedMoments {
  double mu_sum;
  double sigma2_sum;
};

/// Mean and (population) variance of the total over every pairing.
inline EnumeratedMoments enumerated_moments(const CompatibilityMatrix& matrix) {
  detail::check_even_count(matrix.size(), kMaxEnumerationN);
  std::vector<double> totals;
  for_each_pairing(matrix.size(),
                   [&](const Pairing& p) { totals.push_back(total_compatibility(p, matrix)); });
  double mean = 0.0;
  for (double t : totals) mean += t;
  mean /= static_cast<double>(totals.size());
  double var = 0.0;
  for (double t : totals) var += (t - mean) * (t - mean);
  var /= static_cast<double>(totals.size());
  return {mean, var};
}

}  // namespace pairopt

#endif  // PAIROPT_ORACLE_HPP
