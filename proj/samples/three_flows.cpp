// Compares the three ways of feeding a combiner on one random instance:
// the true matrix, an observed class member, and the variance optimum.

#include <cstdio>
#include <cstdlib>

#include "pairopt/pairopt.hpp"

int main(int argc, char** argv) {
  using namespace pairopt;
  const std::size_t n = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 100;
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;

  const auto truth = generate(n, Distribution::Uniform01, seed);
  const FlowInputs inputs(truth);
  std::printf("n=%zu seed=%llu\n", n, static_cast<unsigned long long>(seed));
  std::printf("element variance: truth %.4f, observed %.4f, optimized %.4f\n", inputs.sigma2_g, inputs.sigma2_e1,
              inputs.sigma2_e2);

  CombineConfig cfg;
  cfg.rng_seed = seed;
  for (Flow f : {Flow::Direct, Flow::Observed, Flow::VarianceOptimized}) {
    const auto r = run_flow(f, inputs, cfg);
    std::printf("flow %-3s performance %.5f\n", std::string(to_string(f)).c_str(), r.performance);
  }
}
