#ifndef PAIROPT_OBSPHASE_HPP
#define PAIROPT_OBSPHASE_HPP

// Observation phase under the limited-observation constraint: individual
// compatibilities are hidden and only pairing totals can be measured.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pairopt/pairmat.hpp"
#include "pairopt/random.hpp"

namespace pairopt {

struct QueryRecord {
  Pairing pairing;
  double total;
};

/// Black box over a hidden ground-truth matrix. The only read path is
/// query(), which returns one pairing total and counts the call.
class ObservationOracle {
 public:
  explicit ObservationOracle(CompatibilityMatrix hidden, bool keep_log = false)
      : hidden_(std::move(hidden)), keep_log_(keep_log) {}

  double query(const Pairing& pairing) {
    if (pairing.size() != hidden_.size()) {
      throw Error(Errc::DimensionMismatch, "pairing n=" + std::to_string(pairing.size()) +
                                               " vs oracle n=" + std::to_string(hidden_.size()));
    }
    const double total = total_compatibility(pairing, hidden_);
    ++query_count_;
    if (keep_log_) log_.push_back({pairing, total});
    return total;
  }

  std::size_t size() const noexcept { return hidden_.size(); }
  std::size_t query_count() const noexcept { return query_count_; }
  const std::vector<QueryRecord>& log() const noexcept { return log_; }

 private:
  CompatibilityMatrix hidden_;
  bool keep_log_;
  std::size_t query_count_ = 0;
  std::vector<QueryRecord> log_;
};

/// Class member with row and column 0 identically zero:
///   C~(i,j) = C(i,j) - C(0,i) - C(0,j) + 2/(n-2) * sum_{k>0} C(0,k),  i,j > 0.
inline CompatibilityMatrix observe_transform(const CompatibilityMatrix& matrix) {
  validate(matrix);
  const std::size_t n = matrix.size();
  const double shift = 2.0 / static_cast<double>(n - 2) * adjacent_sum(0, matrix);
  return CompatibilityMatrix::from_fn(n, [&](std::size_t i, std::size_t j) {
    if (i == 0) return 0.0;
    return matrix(i, j) - matrix(0, i) - matrix(0, j) + shift;
  });
}

/// Dimension of the span of all pairing matrices, (n-1)(n-2)/2: the number of
/// independent totals needed to pin down an equivalence class.
inline std::size_t min_observations(std::size_t n) {
  check_element_count(n);
  return (n - 1) * (n - 2) / 2;
}

namespace detail {

// Incremental row echelon basis over the unknowns C~(i,j), 0 < i < j.
// Each stored row is zero at the pivots of all earlier rows.
class ObservationSystem {
 public:
  explicit ObservationSystem(std::size_t n) : n_(n), unknowns_(min_observations(n)) {}

  bool complete() const noexcept { return rows_.size() == unknowns_; }

  // Queries and keeps the pairing only if its pattern is independent of the
  // rows already held. Returns whether it was kept.
  bool try_add(const Pairing& pairing, ObservationOracle& oracle) {
    std::vector<double> row = indicator(pairing);
    std::vector<double> coef(rows_.size(), 0.0);
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const double c = row[rows_[k].pivot];
      if (c == 0.0) continue;
      coef[k] = c;
      const auto& basis = rows_[k].values;
      for (std::size_t v = 0; v < unknowns_; ++v) row[v] -= c * basis[v];
    }
    std::size_t pivot = 0;
    double best = 0.0;
    for (std::size_t v = 0; v < unknowns_; ++v) {
      if (std::abs(row[v]) > best) {
        best = std::abs(row[v]);
        pivot = v;
      }
    }
    if (best < kDependenceTol) return false;

    double rhs = oracle.query(pairing);
    for (std::size_t k = 0; k < rows_.size(); ++k) rhs -= coef[k] * rows_[k].rhs;
    const double scale = 1.0 / row[pivot];
    for (double& v : row) v *= scale;
    row[pivot] = 1.0;
    rows_.push_back({std::move(row), rhs * scale, pivot});
    return true;
  }

  // Back substitution once complete; returns the zero-row-0 representative.
  CompatibilityMatrix solve() const {
    std::vector<double> x(unknowns_, 0.0);
    for (std::size_t k = rows_.size(); k-- > 0;) {
      const Row& r = rows_[k];
      double s = r.rhs;
      for (std::size_t m = k + 1; m < rows_.size(); ++m) s -= r.values[rows_[m].pivot] * x[rows_[m].pivot];
      x[r.pivot] = s;
    }
    return CompatibilityMatrix::from_fn(n_, [&](std::size_t i, std::size_t j) {
      return i == 0 ? 0.0 : x[variable(i, j)];
    });
  }

 private:
  static constexpr double kDependenceTol = 1e-8;

  struct Row {
    std::vector<double> values;
    double rhs;
    std::size_t pivot;
  };

  // Packed index of (i,j), 0 < i < j, inside the (n-1) x (n-1) sub-triangle.
  std::size_t variable(std::size_t i, std::size_t j) const noexcept {
    const std::size_t m = n_ - 1;
    const std::size_t a = i - 1;
    const std::size_t b = j - 1;
    return a * (2 * m - a - 1) / 2 + (b - a - 1);
  }

  std::vector<double> indicator(const Pairing& pairing) const {
    std::vector<double> row(unknowns_, 0.0);
    for (auto [i, j] : pairing.pairs()) {
      if (i != 0) row[variable(i, j)] = 1.0;
    }
    return row;
  }

  std::size_t n_;
  std::size_t unknowns_;
  std::vector<Row> rows_;
};

// Both 2-exchange rewirings of slots p < q of `base`.
inline void push_rewirings(const std::vector<std::pair<std::size_t, std::size_t>>& base,
                           std::size_t n, std::vector<Pairing>& out) {
  for (std::size_t p = 0; p < base.size(); ++p) {
    for (std::size_t q = p + 1; q < base.size(); ++q) {
      const auto [a, b] = base[p];
      const auto [c, d] = base[q];
      for (int variant = 0; variant < 2; ++variant) {
        auto pairs = base;
        if (variant == 0) {
          pairs[p] = {a, c};
          pairs[q] = {b, d};
        } else {
          pairs[p] = {a, d};
          pairs[q] = {b, c};
        }
        out.push_back(Pairing::from_pairs(n, pairs));
      }
    }
  }
}

// Round r of the circle-method 1-factorisation of the complete graph.
inline std::vector<std::pair<std::size_t, std::size_t>> round_robin(std::size_t n, std::size_t r) {
  const std::size_t m = n - 1;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.emplace_back(r, m);
  for (std::size_t k = 1; k < n / 2; ++k) pairs.emplace_back((r + k) % m, (r + m - k) % m);
  return pairs;
}

}  // namespace detail

/// Recovers the class of the hidden matrix from pairing totals alone.
///
/// Candidate pairings are the reference pairing {0,1},{2,3},..., its 2-exchange
/// rewirings, then the rounds of a round-robin schedule and their rewirings,
/// then seeded random pairings. A candidate is queried only if its pattern is
/// linearly independent of those already queried, so exactly
/// min_observations(n) queries are made. The result is the class member with
/// row and column 0 zero, the same gauge as observe_transform().
inline CompatibilityMatrix reconstruct(ObservationOracle& oracle, std::uint64_t seed = 0) {
  const std::size_t n = oracle.size();
  check_element_count(n);
  if (n < 6) throw Error(Errc::TooSmall, "reconstruction needs n >= 6, got " + std::to_string(n));

  detail::ObservationSystem system(n);
  auto offer = [&](const Pairing& p) {
    if (!system.complete()) system.try_add(p, oracle);
  };

  const Pairing reference = Pairing::sequential(n);
  offer(reference);
  std::vector<Pairing> candidates;
  detail::push_rewirings(reference.pairs(), n, candidates);
  for (std::size_t r = 0; r + 1 < n && candidates.size() < 4 * n * n; ++r) {
    const auto rr = detail::round_robin(n, r);
    candidates.push_back(Pairing::from_pairs(n, rr));
    detail::push_rewirings(rr, n, candidates);
  }
  for (const Pairing& p : candidates) {
    if (system.complete()) break;
    offer(p);
  }

  Rng rng(seed);
  std::vector<std::size_t> order(n);
  for (std::size_t attempt = 0; !system.complete() && attempt < 64 * n * n; ++attempt) {
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(std::span<std::size_t>(order));
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; i += 2) pairs.emplace_back(order[i], order[i + 1]);
    offer(Pairing::from_pairs(n, pairs));
  }
  if (!system.complete()) {
    throw Error(Errc::RankDeficient, "candidate schedule did not reach full rank");
  }
  return system.solve();
}

}  // namespace pairopt

#endif  // PAIROPT_OBSPHASE_HPP
