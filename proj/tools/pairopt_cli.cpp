// pairopt: command-line front end for the pairing-optimisation pipeline.
//
// Exit codes: 0 success, 2 usage, 3 I/O, 4 matrix validation.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pairopt/pairopt.hpp"

namespace {

using namespace pairopt;

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitValidation = 4;

struct ExitError {
  int code;
  std::string message;
};

[[noreturn]] void usage_error(const std::string& msg) { throw ExitError{kExitUsage, msg}; }

// Reads a matrix file, mapping failures onto the I/O and validation codes.
CompatibilityMatrix load_matrix(const std::string& path) {
  try {
    return read_matrix_file(path).matrix;
  } catch (const Error& e) {
    throw ExitError{e.code() == Errc::IoError ? kExitIo : kExitValidation, path + ": " + e.what()};
  }
}

template <class F>
void with_io(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    if (e.code() == Errc::IoError) throw ExitError{kExitIo, e.what()};
    throw;
  }
}

void print_pairing(std::ostream& out, const Pairing& p) {
  bool first = true;
  for (auto [i, j] : p.pairs()) {
    out << (first ? "" : " ") << pair_token(i, j);
    first = false;
  }
}

// --- gen ---------------------------------------------------------------------

struct GenArgs {
  std::size_t n = 0;
  std::string dist = "uniform01";
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen(const GenArgs& a) {
  if (a.n % 2 != 0 || a.n < 4) usage_error("--n must be an even integer >= 4, got " + std::to_string(a.n));
  Distribution dist;
  try {
    dist = parse_distribution(a.dist);
  } catch (const Error& e) {
    usage_error(e.what());
  }
  const auto c = generate(a.n, dist, a.seed);
  with_io([&] { write_matrix_file(a.out, c); });
  std::cout << "wrote n=" << a.n << " " << a.dist << " matrix (seed " << a.seed << ") to " << a.out << "\n";
  return 0;
}

// --- transform -----------------------------------------------------------------

struct TransformArgs {
  std::string in;
  std::string mode;
  std::string out;
};

int run_transform(const TransformArgs& a) {
  const auto c = load_matrix(a.in);
  const auto result = a.mode == "observe" ? observe_transform(c) : variance_optimize(c);
  with_io([&] { write_matrix_file(a.out, result); });
  std::cout << "sigma2_element before: " << format_double(element_variance(c)) << "\n"
            << "sigma2_element after:  " << format_double(element_variance(result)) << "\n";
  return 0;
}

// --- pair ----------------------------------------------------------------------

struct PairArgs {
  std::string in;
  std::string out;
  std::size_t exchange_limit = 600;
  std::uint64_t seed = 0;
  std::string ground_truth;
};

int run_pair(const PairArgs& a) {
  if (a.exchange_limit < 1) usage_error("--exchange-limit must be >= 1");
  const auto c = load_matrix(a.in);
  std::optional<CompatibilityMatrix> truth;
  if (!a.ground_truth.empty()) {
    truth = load_matrix(a.ground_truth);
    if (truth->size() != c.size()) {
      throw ExitError{kExitValidation, "ground truth n=" + std::to_string(truth->size()) +
                                           " does not match input n=" + std::to_string(c.size())};
    }
  }
  CombineConfig cfg;
  cfg.exchange_limit = a.exchange_limit;
  cfg.rng_seed = a.seed;
  const Pairing p = combine(c, cfg);
  with_io([&] { write_pairing_file(a.out, p); });
  std::cout << "total: " << format_double(total_compatibility(p, c)) << "\n";
  if (truth) {
    const double t = total_compatibility(p, *truth);
    std::cout << "ground-truth total: " << format_double(t) << "\n"
              << "performance: " << format_double(2.0 * t / static_cast<double>(c.size())) << "\n";
  }
  return 0;
}

// --- exact ---------------------------------------------------------------------

int run_exact(const std::string& in) {
  const auto c = load_matrix(in);
  if (c.size() > kMaxEnumerationN) {
    usage_error("exact search supports n <= " + std::to_string(kMaxEnumerationN) + ", got n=" +
                std::to_string(c.size()));
  }
  const auto best = brute_force_optimum(c);
  std::cout << "pairing: ";
  print_pairing(std::cout, best.pairing);
  std::cout << "\ntotal: " << format_double(best.total) << "\n"
            << "pairing_count: " << pairing_count(c.size()) << "\n";
  return 0;
}

// --- reconstruct -----------------------------------------------------------------

struct ReconstructArgs {
  std::string in;
  std::string out;
  std::string log;
  std::uint64_t seed = 0;
};

int run_reconstruct(const ReconstructArgs& a) {
  const auto hidden = load_matrix(a.in);
  if (hidden.size() < 6) usage_error("reconstruction needs n >= 6");
  ObservationOracle oracle(hidden, !a.log.empty());
  const auto estimate = reconstruct(oracle, a.seed);
  with_io([&] {
    write_matrix_file(a.out, estimate);
    if (!a.log.empty()) {
      auto out = detail::open_out(a.log);
      write_query_log(out, oracle.log());
      detail::finish(out, a.log);
    }
  });
  std::cout << "queries: " << oracle.query_count() << " (minimum " << min_observations(hidden.size())
            << ")\n"
            << "equivalent to input: " << (equivalent(estimate, hidden, 1e-6) ? "yes" : "no") << "\n";
  return 0;
}

// --- experiment ------------------------------------------------------------------

struct ExperimentArgs {
  std::string config;
  std::vector<std::size_t> n_values;
  std::size_t trials = 0;
  std::vector<std::string> dists;
  std::vector<std::string> flows;
  std::size_t exchange_limit = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string summary;
  std::size_t jobs = 0;
  bool full_sweep = false;
  bool timing = false;
};

std::vector<std::string> string_or_list(const nlohmann::json& j) {
  if (j.is_string()) return {j.get<std::string>()};
  return j.get<std::vector<std::string>>();
}

void apply_json(ExperimentConfig& cfg, const nlohmann::json& j) {
  for (const auto& [key, value] : j.items()) {
    if (key == "n_values") {
      cfg.n_values = value.get<std::vector<std::size_t>>();
    } else if (key == "trials") {
      cfg.trials = value.get<std::size_t>();
    } else if (key == "distribution") {
      cfg.distributions.clear();
      for (const auto& d : string_or_list(value)) cfg.distributions.push_back(parse_distribution(d));
    } else if (key == "flows") {
      cfg.flows.clear();
      for (const auto& f : string_or_list(value)) cfg.flows.push_back(parse_flow(f));
    } else if (key == "exchange_limit") {
      cfg.exchange_limit = value.get<std::size_t>();
    } else if (key == "master_seed") {
      cfg.master_seed = value.get<std::uint64_t>();
    } else if (key == "output_path") {
      cfg.output_path = value.get<std::string>();
    } else if (key == "summary_path") {
      cfg.summary_path = value.get<std::string>();
    } else if (key == "jobs") {
      cfg.jobs = value.get<std::size_t>();
    } else if (key == "record_timing") {
      cfg.record_timing = value.get<bool>();
    } else {
      throw Error(Errc::ParseError, "unknown config field '" + key + "'");
    }
  }
}

std::string default_summary_path(const std::string& out) {
  std::filesystem::path p(out);
  const std::string stem = p.stem().string();
  return (p.parent_path() / (stem + "_summary.csv")).string();
}

int run_experiment_cmd(const ExperimentArgs& a, const CLI::App& sub) {
  ExperimentConfig cfg;
  cfg.output_path = "results.csv";
  try {
    if (!a.config.empty()) {
      std::ifstream in(a.config);
      if (!in) throw ExitError{kExitIo, "cannot open config '" + a.config + "'"};
      apply_json(cfg, nlohmann::json::parse(in));
    }
    if (a.full_sweep) cfg.n_values = full_sweep_n_values();
    if (sub.count("--n")) cfg.n_values = a.n_values;
    if (sub.count("--trials")) cfg.trials = a.trials;
    if (sub.count("--dist")) {
      cfg.distributions.clear();
      for (const auto& d : a.dists) cfg.distributions.push_back(parse_distribution(d));
    }
    if (sub.count("--flows")) {
      cfg.flows.clear();
      for (const auto& f : a.flows) cfg.flows.push_back(parse_flow(f));
    }
    if (sub.count("--exchange-limit")) cfg.exchange_limit = a.exchange_limit;
    if (sub.count("--seed")) cfg.master_seed = a.seed;
    if (sub.count("--out")) cfg.output_path = a.out;
    if (sub.count("--summary")) cfg.summary_path = a.summary;
    if (sub.count("--jobs")) cfg.jobs = a.jobs;
    if (a.timing) cfg.record_timing = true;
    if (cfg.summary_path.empty()) cfg.summary_path = default_summary_path(cfg.output_path);
    cfg.validate();
  } catch (const nlohmann::json::exception& e) {
    usage_error(std::string("config: ") + e.what());
  } catch (const Error& e) {
    usage_error(e.what());
  }

  std::vector<TrialRecord> records;
  with_io([&] { records = run_experiment(cfg); });
  std::cout << "wrote " << records.size() << " records to " << cfg.output_path << " and summary to "
            << cfg.summary_path << "\n";
  std::printf("%6s %-10s %-4s %12s %12s\n", "n", "dist", "flow", "mean_perf", "std_perf");
  for (const auto& s : summarize(records)) {
    std::printf("%6zu %-10s %-4s %12.6f %12.6f\n", s.n, s.distribution.c_str(),
                std::string(to_string(s.flow)).c_str(), s.mean_performance, s.std_performance);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pairing optimisation: equivalence classes, variance optimisation and heuristics"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random compatibility matrix");
  gen_cmd->add_option("--n", gen.n, "Element count (even, >= 4)")->required();
  gen_cmd->add_option("--dist", gen.dist, "uniform01 | poisson1 | gaussian | binary");
  gen_cmd->add_option("--seed", gen.seed, "RNG seed");
  gen_cmd->add_option("--out", gen.out, "Output matrix file")->required();

  TransformArgs tr;
  auto* tr_cmd = app.add_subcommand("transform", "Apply the observation transform or variance optimisation");
  tr_cmd->add_option("--in", tr.in, "Input matrix file")->required();
  tr_cmd->add_option("--mode", tr.mode, "observe | varopt")
      ->required()
      ->check(CLI::IsMember({"observe", "varopt"}));
  tr_cmd->add_option("--out", tr.out, "Output matrix file")->required();

  PairArgs pr;
  auto* pair_cmd = app.add_subcommand("pair", "Find a high-total pairing (PNN + P2-opt)");
  pair_cmd->add_option("--in", pr.in, "Matrix the combiner sees")->required();
  pair_cmd->add_option("--out", pr.out, "Output pairing file")->required();
  pair_cmd->add_option("--exchange-limit", pr.exchange_limit, "Consecutive failed exchanges before stopping");
  pair_cmd->add_option("--seed", pr.seed, "RNG seed");
  pair_cmd->add_option("--ground-truth", pr.ground_truth, "Matrix to score the pairing against");

  std::string exact_in;
  auto* exact_cmd = app.add_subcommand("exact", "Exhaustive optimum for n <= 14");
  exact_cmd->add_option("--in", exact_in, "Input matrix file")->required();

  ReconstructArgs rc;
  auto* rc_cmd = app.add_subcommand("reconstruct", "Recover a class member from pairing totals only");
  rc_cmd->add_option("--in", rc.in, "Hidden ground-truth matrix")->required();
  rc_cmd->add_option("--out", rc.out, "Output estimated matrix")->required();
  rc_cmd->add_option("--log", rc.log, "Query log CSV");
  rc_cmd->add_option("--seed", rc.seed, "Seed for fallback random queries");

  ExperimentArgs ex;
  auto* ex_cmd = app.add_subcommand("experiment", "Run the three-flow comparison");
  ex_cmd->add_option("--config", ex.config, "JSON file with ExperimentConfig fields");
  ex_cmd->add_option("--n", ex.n_values, "Element counts");
  ex_cmd->add_option("--trials", ex.trials, "Trials per (n, distribution)");
  ex_cmd->add_option("--dist", ex.dists, "Distributions");
  ex_cmd->add_option("--flows", ex.flows, "Subset of i, ii, iii");
  ex_cmd->add_option("--exchange-limit", ex.exchange_limit, "P2-opt exchange limit");
  ex_cmd->add_option("--seed", ex.seed, "Master seed");
  ex_cmd->add_option("--out", ex.out, "Results CSV");
  ex_cmd->add_option("--summary", ex.summary, "Summary CSV (default <out>_summary.csv)");
  ex_cmd->add_option("--jobs", ex.jobs, "Worker threads (default: logical processors)");
  ex_cmd->add_flag("--paper-scale", ex.full_sweep, "Sweep n = 100..1000 step 100");
  ex_cmd->add_flag("--timing", ex.timing, "Record wall times (results then differ between runs)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc_code = app.exit(e);
    return rc_code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*tr_cmd) return run_transform(tr);
    if (*pair_cmd) return run_pair(pr);
    if (*exact_cmd) return run_exact(exact_in);
    if (*rc_cmd) return run_reconstruct(rc);
    if (*ex_cmd) return run_experiment_cmd(ex, *ex_cmd);
  } catch (const ExitError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == Errc::IoError ? kExitIo : kExitValidation;
  }
  return kExitUsage;
}
