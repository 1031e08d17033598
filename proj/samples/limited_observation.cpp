// Recovers a hidden matrix up to equivalence from pairing totals alone, then
// pairs on the estimate and scores the result on the hidden matrix.

#include <cstdio>

#include "pairopt/pairopt.hpp"

int main() {
  using namespace pairopt;
  const std::size_t n = 12;
  const auto hidden = generate(n, Distribution::Poisson1, 5);

  ObservationOracle oracle(hidden);
  const auto estimate = reconstruct(oracle);
  std::printf("%zu queries (minimum %zu), equivalent: %s\n", oracle.query_count(), min_observations(n),
              equivalent(estimate, hidden, 1e-6) ? "yes" : "no");

  const auto smooth = variance_optimize(estimate);
  const Pairing p = combine(smooth, CombineConfig{});
  std::printf("hidden total of chosen pairing: %g, exhaustive optimum: %g\n", total_compatibility(p, hidden),
              brute_force_optimum(hidden).total);
  for (auto [i, j] : p.pairs()) std::printf(" %s", pair_token(i, j).c_str());
  std::printf("\n");
}
