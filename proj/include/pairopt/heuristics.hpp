#ifndef PAIROPT_HEURISTICS_HPP
#define PAIROPT_HEURISTICS_HPP

// Combining phase: greedy construction (PNN) followed by pairwise 2-exchange
// refinement (P2-opt).

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "pairopt/pairmat.hpp"
#include "pairopt/random.hpp"

namespace pairopt {

enum class ExchangeLimitPolicy {
  ConsecutiveFailures,  // stop after `exchange_limit` non-improving proposals in a row
  TotalProposals,       // stop after `exchange_limit` proposals overall
};

struct CombineConfig {
  std::size_t exchange_limit = 600;
  std::uint64_t rng_seed = 0;
  bool maximize = true;
  ExchangeLimitPolicy policy = ExchangeLimitPolicy::ConsecutiveFailures;
};

struct RefineStats {
  std::size_t proposals = 0;
  std::size_t accepted = 0;
};

namespace detail {

inline void check_config(const CombineConfig& config) {
  if (config.exchange_limit < 1) throw Error(Errc::ParseError, "exchange_limit must be >= 1");
}

// Signed view of the matrix: larger is always better.
struct Objective {
  const CompatibilityMatrix& matrix;
  double sign;
  double operator()(std::size_t i, std::size_t j) const noexcept { return sign * matrix(i, j); }
};

// Improvements below this (relative to the pair values involved) are treated
// as rounding noise, so exact ties never trigger a move.
inline constexpr double kImprovementTol = 1e-12;

}  // namespace detail

/// Greedy construction: visit elements in seeded random order and pair each
/// unpaired one with its best unpaired partner (lowest index on ties).
inline Pairing pnn_construct(const CompatibilityMatrix& matrix, const CombineConfig& config) {
  validate(matrix);
  detail::check_config(config);
  const std::size_t n = matrix.size();
  const detail::Objective value{matrix, config.maximize ? 1.0 : -1.0};

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(mix_seed({config.rng_seed, 0x504e4eULL}));
  rng.shuffle(std::span<std::size_t>(order));

  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> partner(n, kUnset);
  for (std::size_t i : order) {
    if (partner[i] != kUnset) continue;
    std::size_t best = kUnset;
    double best_value = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || partner[j] != kUnset) continue;
      const double v = value(i, j);
      if (best == kUnset || v > best_value) {
        best = j;
        best_value = v;
      }
    }
    partner[i] = best;
    partner[best] = i;
  }
  return Pairing(std::move(partner));
}

/// 2-exchange local search. Each proposal samples two distinct pairs {a,b},
/// {c,d}, evaluates {a,c},{b,d} and {a,d},{b,c}, and applies the better one if
/// it strictly improves the total. The total never decreases.
inline Pairing p2opt_refine(const Pairing& pairing, const CompatibilityMatrix& matrix,
                            const CombineConfig& config, RefineStats* stats = nullptr) {
  validate(matrix);
  detail::check_config(config);
  if (pairing.size() != matrix.size()) {
    throw Error(Errc::DimensionMismatch, "pairing n=" + std::to_string(pairing.size()) +
                                             " vs matrix n=" + std::to_string(matrix.size()));
  }
  const detail::Objective value{matrix, config.maximize ? 1.0 : -1.0};
  std::vector<std::pair<std::size_t, std::size_t>> slots = pairing.pairs();
  const std::size_t m = slots.size();
  Rng rng(mix_seed({config.rng_seed, 0x50326f7074ULL}));

  RefineStats local;
  std::size_t failures = 0;
  while (m >= 2) {
    const std::size_t budget_used =
        config.policy == ExchangeLimitPolicy::ConsecutiveFailures ? failures : local.proposals;
    if (budget_used >= config.exchange_limit) break;

    const std::size_t p = static_cast<std::size_t>(rng.below(m));
    std::size_t q = static_cast<std::size_t>(rng.below(m - 1));
    if (q >= p) ++q;
    ++local.proposals;

    const auto [a, b] = slots[p];
    const auto [c, d] = slots[q];
    const double current = value(a, b) + value(c, d);
    const double cross = value(a, c) + value(b, d);
    const double twisted = value(a, d) + value(b, c);
    const double best = std::max(cross, twisted);
    const double scale = std::max({1.0, std::abs(current), std::abs(best)});
    if (best - current > detail::kImprovementTol * scale) {
      if (cross >= twisted) {
        slots[p] = {a, c};
        slots[q] = {b, d};
      } else {
        slots[p] = {a, d};
        slots[q] = {b, c};
      }
      assert(best > current);
      ++local.accepted;
      failures = 0;
    } else {
      ++failures;
    }
  }
  if (stats) *stats = local;
  return Pairing::from_pairs(matrix.size(), slots);
}

/// PNN construction followed by P2-opt refinement.
inline Pairing combine(const CompatibilityMatrix& matrix, const CombineConfig& config) {
  return p2opt_refine(pnn_construct(matrix, config), matrix, config);
}

}  // namespace pairopt

#endif  // PAIROPT_HEURISTICS_HPP
