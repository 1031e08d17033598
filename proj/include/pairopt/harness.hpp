#ifndef PAIROPT_HARNESS_HPP
#define PAIROPT_HARNESS_HPP

// Experiment harness: random ground-truth instances and the three-flow
// comparison
//   (i)   combine on the ground truth C^g,
//   (ii)  combine on C^e1 = observe_transform(C^g),
//   (iii) combine on C^e2 = variance_optimize(C^e1),
// with every pairing scored against C^g as 2 <S, C^g> / n.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include "pairopt/equivalence.hpp"
#include "pairopt/heuristics.hpp"
#include "pairopt/io.hpp"
#include "pairopt/obsphase.hpp"
#include "pairopt/pairmat.hpp"
#include "pairopt/random.hpp"

namespace pairopt {

enum class Distribution { Uniform01, Poisson1, Gaussian, Binary };

inline constexpr std::string_view to_string(Distribution d) noexcept {
  switch (d) {
    case Distribution::Uniform01: return "uniform01";
    case Distribution::Poisson1: return "poisson1";
    case Distribution::Gaussian: return "gaussian";
    case Distribution::Binary: return "binary";
  }
  return "unknown";
}

inline Distribution parse_distribution(std::string_view name) {
  for (auto d : {Distribution::Uniform01, Distribution::Poisson1, Distribution::Gaussian,
                 Distribution::Binary}) {
    if (name == to_string(d)) return d;
  }
  throw Error(Errc::UnknownDistribution,
              "'" + std::string(name) + "' (expected uniform01, poisson1, gaussian or binary)");
}

/// Gaussian instances use mean 0.5 and standard deviation 0.5/3.
inline constexpr double kGaussianMean = 0.5;
inline constexpr double kGaussianStddev = 0.5 / 3.0;

/// I.i.d. off-diagonal entries from `dist`, deterministic per seed.
inline CompatibilityMatrix generate(std::size_t n, Distribution dist, std::uint64_t seed) {
  check_element_count(n);
  Rng rng(seed);
  return CompatibilityMatrix::from_fn(n, [&](std::size_t, std::size_t) -> double {
    switch (dist) {
      case Distribution::Uniform01: return rng.uniform01();
      case Distribution::Poisson1: return static_cast<double>(rng.poisson(1.0));
      case Distribution::Gaussian: return kGaussianMean + kGaussianStddev * rng.normal();
      case Distribution::Binary: return static_cast<double>(rng.next() >> 63);
    }
    return 0.0;
  });
}

enum class Flow { Direct, Observed, VarianceOptimized };

inline constexpr std::string_view to_string(Flow f) noexcept {
  switch (f) {
    case Flow::Direct: return "i";
    case Flow::Observed: return "ii";
    case Flow::VarianceOptimized: return "iii";
  }
  return "?";
}

inline Flow parse_flow(std::string_view name) {
  for (auto f : {Flow::Direct, Flow::Observed, Flow::VarianceOptimized}) {
    if (name == to_string(f)) return f;
  }
  throw Error(Errc::ParseError, "unknown flow '" + std::string(name) + "' (expected i, ii or iii)");
}

struct TrialRecord {
  std::size_t n = 0;
  std::string distribution;
  std::size_t trial_index = 0;
  Flow flow = Flow::Direct;
  double total = 0.0;
  double performance = 0.0;
  double sigma2_g = 0.0;
  double sigma2_e1 = 0.0;
  double sigma2_e2 = 0.0;
  std::uint64_t seed = 0;
  double wall_time_ms = 0.0;
};

/// The three matrices of one trial and their element variances.
struct FlowInputs {
  CompatibilityMatrix ground_truth;
  CompatibilityMatrix observed;
  CompatibilityMatrix optimized;
  double sigma2_g;
  double sigma2_e1;
  double sigma2_e2;

  explicit FlowInputs(CompatibilityMatrix gt)
      : ground_truth(std::move(gt)),
        observed(observe_transform(ground_truth)),
        optimized(variance_optimize(observed)),
        sigma2_g(element_variance(ground_truth)),
        sigma2_e1(element_variance(observed)),
        sigma2_e2(element_variance(optimized)) {}

  const CompatibilityMatrix& for_flow(Flow f) const noexcept {
    switch (f) {
      case Flow::Direct: return ground_truth;
      case Flow::Observed: return observed;
      case Flow::VarianceOptimized: return optimized;
    }
    return ground_truth;
  }
};

/// Runs one flow; the pairing is always scored against the ground truth.
inline TrialRecord run_flow(Flow flow, const FlowInputs& inputs, const CombineConfig& config) {
  const Pairing pairing = combine(inputs.for_flow(flow), config);
  TrialRecord r;
  r.n = inputs.ground_truth.size();
  r.flow = flow;
  r.total = total_compatibility(pairing, inputs.ground_truth);
  r.performance = 2.0 * r.total / static_cast<double>(r.n);
  r.sigma2_g = inputs.sigma2_g;
  r.sigma2_e1 = inputs.sigma2_e1;
  r.sigma2_e2 = inputs.sigma2_e2;
  r.seed = config.rng_seed;
  return r;
}

inline TrialRecord run_flow(Flow flow, const CompatibilityMatrix& ground_truth,
                            const CombineConfig& config) {
  return run_flow(flow, FlowInputs(ground_truth), config);
}

struct ExperimentConfig {
  std::vector<std::size_t> n_values = {20, 60, 100, 200};
  std::size_t trials = 100;
  std::vector<Distribution> distributions = {Distribution::Uniform01};
  std::vector<Flow> flows = {Flow::Direct, Flow::Observed, Flow::VarianceOptimized};
  std::size_t exchange_limit = 600;
  std::uint64_t master_seed = 0;
  std::string output_path;
  std::string summary_path;
  /// Worker threads; 0 means one per logical processor.
  std::size_t jobs = 0;
  /// Off by default: measured times would make result files differ between runs.
  bool record_timing = false;
  /// Replaces the named distributions when set (records are tagged "custom").
  std::function<CompatibilityMatrix(std::size_t n, std::uint64_t seed)> generator;

  void validate() const {
    if (trials < 1) throw Error(Errc::ParseError, "trials must be >= 1");
    if (exchange_limit < 1) throw Error(Errc::ParseError, "exchange_limit must be >= 1");
    if (n_values.empty()) throw Error(Errc::ParseError, "n_values is empty");
    if (flows.empty()) throw Error(Errc::ParseError, "flows is empty");
    if (!generator && distributions.empty()) throw Error(Errc::ParseError, "distribution is empty");
    for (std::size_t n : n_values) check_element_count(n);
  }
};

/// n = 100, 200, ..., 1000.
inline std::vector<std::size_t> full_sweep_n_values() {
  std::vector<std::size_t> out;
  for (std::size_t n = 100; n <= 1000; n += 100) out.push_back(n);
  return out;
}

/// Seed of the ground-truth instance for one trial; shared by all flows.
inline std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t n, std::string_view dist,
                                std::size_t trial_index) {
  std::uint64_t tag = 0xcbf29ce484222325ULL;  // FNV-1a of the distribution name
  for (char ch : dist) tag = (tag ^ static_cast<unsigned char>(ch)) * 0x100000001b3ULL;
  return mix_seed({master_seed, n, tag, trial_index});
}

namespace detail {

inline int flow_rank(Flow f) { return static_cast<int>(f); }

inline int distribution_rank(std::string_view name) {
  for (auto d : {Distribution::Uniform01, Distribution::Poisson1, Distribution::Gaussian,
                 Distribution::Binary}) {
    if (name == to_string(d)) return static_cast<int>(d);
  }
  return 100;
}

}  // namespace detail

inline bool record_order(const TrialRecord& a, const TrialRecord& b) {
  return std::make_tuple(a.n, detail::distribution_rank(a.distribution), a.distribution,
                         a.trial_index, detail::flow_rank(a.flow)) <
         std::make_tuple(b.n, detail::distribution_rank(b.distribution), b.distribution,
                         b.trial_index, detail::flow_rank(b.flow));
}

inline constexpr std::string_view kResultsHeader =
    "n,distribution,trial,flow,total,performance,sigma2_g,sigma2_e1,sigma2_e2,seed,wall_time_ms";
inline constexpr std::string_view kSummaryHeader =
    "n,distribution,flow,trials,mean_performance,std_performance,mean_sigma2_g,mean_sigma2_e1,"
    "mean_sigma2_e2";

inline void write_results_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << kResultsHeader << '\n';
  for (const auto& r : records) {
    out << r.n << ',' << r.distribution << ',' << r.trial_index << ',' << to_string(r.flow) << ','
        << format_double(r.total) << ',' << format_double(r.performance) << ','
        << format_double(r.sigma2_g) << ',' << format_double(r.sigma2_e1) << ','
        << format_double(r.sigma2_e2) << ',' << r.seed << ',' << format_double(r.wall_time_ms)
        << '\n';
  }
}

struct SummaryRow {
  std::size_t n;
  std::string distribution;
  Flow flow;
  std::size_t trials;
  double mean_performance;
  double std_performance;  // sample standard deviation
  double mean_sigma2_g;
  double mean_sigma2_e1;
  double mean_sigma2_e2;
};

/// Per (n, distribution, flow) aggregates; `records` must be in record_order.
inline std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  std::vector<SummaryRow> rows;
  // Records are grouped by (n, distribution) and interleaved by flow; collect
  // the group members per flow before aggregating.
  std::map<std::tuple<std::size_t, int, std::string, int>, std::vector<const TrialRecord*>> groups;
  for (const auto& r : records) {
    groups[{r.n, detail::distribution_rank(r.distribution), r.distribution, detail::flow_rank(r.flow)}]
        .push_back(&r);
  }
  for (const auto& [key, members] : groups) {
    const double k = static_cast<double>(members.size());
    SummaryRow s{members.front()->n, members.front()->distribution, members.front()->flow,
                 members.size(), 0.0, 0.0, 0.0, 0.0, 0.0};
    for (const auto* r : members) {
      s.mean_performance += r->performance;
      s.mean_sigma2_g += r->sigma2_g;
      s.mean_sigma2_e1 += r->sigma2_e1;
      s.mean_sigma2_e2 += r->sigma2_e2;
    }
    s.mean_performance /= k;
    s.mean_sigma2_g /= k;
    s.mean_sigma2_e1 /= k;
    s.mean_sigma2_e2 /= k;
    double ss = 0.0;
    for (const auto* r : members) ss += (r->performance - s.mean_performance) * (r->performance - s.mean_performance);
    s.std_performance = members.size() > 1 ? std::sqrt(ss / (k - 1.0)) : 0.0;
    rows.push_back(std::move(s));
  }
  return rows;
}

inline void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const auto& s : rows) {
    out << s.n << ',' << s.distribution << ',' << to_string(s.flow) << ',' << s.trials << ','
        << format_double(s.mean_performance) << ',' << format_double(s.std_performance) << ','
        << format_double(s.mean_sigma2_g) << ',' << format_double(s.mean_sigma2_e1) << ','
        << format_double(s.mean_sigma2_e2) << '\n';
  }
}

/// Runs trials x |n_values| x |distributions| x |flows| combinations. Trials run
/// on a worker pool; records are sorted by (n, distribution, trial, flow)
/// before being returned or written, so the output is independent of
/// scheduling.
inline std::vector<TrialRecord> run_experiment(const ExperimentConfig& config) {
  config.validate();

  struct Item {
    std::size_t n;
    std::string dist_name;
    Distribution dist;
    std::size_t trial;
  };
  std::vector<Item> items;
  for (std::size_t n : config.n_values) {
    if (config.generator) {
      for (std::size_t t = 0; t < config.trials; ++t) items.push_back({n, "custom", Distribution::Uniform01, t});
    } else {
      for (Distribution d : config.distributions) {
        for (std::size_t t = 0; t < config.trials; ++t) {
          items.push_back({n, std::string(to_string(d)), d, t});
        }
      }
    }
  }

  std::vector<std::vector<TrialRecord>> per_item(items.size());
  auto work = [&](const Item& item) {
    const std::uint64_t seed = trial_seed(config.master_seed, item.n, item.dist_name, item.trial);
    const FlowInputs inputs(config.generator ? config.generator(item.n, seed)
                                             : generate(item.n, item.dist, seed));
    CombineConfig combine_config;
    combine_config.exchange_limit = config.exchange_limit;
    combine_config.rng_seed = mix_seed({seed, 0x636f6d62ULL});
    std::vector<TrialRecord> out;
    for (Flow f : config.flows) {
      const auto start = std::chrono::steady_clock::now();
      TrialRecord r = run_flow(f, inputs, combine_config);
      const auto stop = std::chrono::steady_clock::now();
      r.distribution = item.dist_name;
      r.trial_index = item.trial;
      r.seed = seed;
      r.wall_time_ms = config.record_timing
                           ? std::chrono::duration<double, std::milli>(stop - start).count()
                           : 0.0;
      out.push_back(std::move(r));
    }
    return out;
  };

  std::size_t jobs = config.jobs ? config.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, items.size());
  if (jobs <= 1) {
    for (std::size_t k = 0; k < items.size(); ++k) per_item[k] = work(items[k]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t k = next++; k < items.size(); k = next++) per_item[k] = work(items[k]);
        } catch (...) {
          errors[w] = std::current_exception();
          next = items.size();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<TrialRecord> records;
  records.reserve(items.size() * config.flows.size());
  for (auto& v : per_item) {
    for (auto& r : v) records.push_back(std::move(r));
  }
  std::sort(records.begin(), records.end(), record_order);

  if (!config.output_path.empty()) {
    auto out = detail::open_out(config.output_path);
    write_results_csv(out, records);
    detail::finish(out, config.output_path);
  }
  if (!config.summary_path.empty()) {
    auto out = detail::open_out(config.summary_path);
    write_summary_csv(out, summarize(records));
    detail::finish(out, config.summary_path);
  }
  return records;
}

}  // namespace pairopt

#endif  // PAIROPT_HARNESS_HPP
