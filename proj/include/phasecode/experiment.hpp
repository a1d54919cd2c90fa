#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "phasecode/core.hpp"
#include "phasecode/decoder.hpp"
#include "phasecode/ensemble.hpp"
#include "phasecode/fourier.hpp"

namespace phasecode {

struct ExperimentConfig {
  Index n = 1000000;
  std::size_t K = 100;
  std::size_t d = 7;
  double c = 0.0;         // M = ceil(c K) when bins == 0
  std::size_t bins = 0;
  EnsembleKind ensemble = EnsembleKind::BallsAndBins;
  std::vector<std::uint64_t> coprimes;
  unsigned alpha = 1;
  Algorithm algorithm = Algorithm::Unicolor;
  ModulationMode modulation = ModulationMode::Standard;
  std::size_t trials = 100;
  RngSeed seed{1};
  double success_threshold = -1.0;  // < 0: 1 - p*(d, c)
  std::size_t threads = 1;
  std::size_t max_sweeps = 0;
  double tau = kDefaultTau;

  /// Total bins M for this configuration.
  std::size_t num_bins() const;
  /// Effective n (product of coprimes for CRT).
  Index effective_n() const;
  double effective_threshold() const;
  /// Throws ParameterError on inconsistent settings.
  void validate() const;
  std::vector<std::pair<std::string, std::string>> to_kv() const;
};

/// Ensemble for one trial; balls-and-bins ensembles are redrawn per trial.
CodeEnsemble make_ensemble(const ExperimentConfig& cfg, RngSeed trial_seed);

struct TrialRecord {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  DecodeStatus status = DecodeStatus::Failure;
  double fraction_recovered = 0.0;  // correctly recovered / K
  bool success = false;
  std::size_t sweeps = 0;
  double wall_time_ms = 0.0;
  std::size_t giant_after_merge = 0;
  std::size_t peak_state = 0;
  std::vector<std::size_t> colored_after_sweep;
};

/// Runs one trial end to end (generate, encode, decode, score).
TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t trial);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

Interval wilson_interval(std::size_t failures, std::size_t trials, double z = 1.959963984540054);

struct SimulationSummary {
  std::size_t trials = 0;
  std::size_t failures = 0;
  double error_probability = 0.0;
  Interval ci;
  double mean_fraction = 0.0;
  double threshold = 1.0;
  std::vector<TrialRecord> records;
};

SimulationSummary run_simulation(const ExperimentConfig& cfg);

/// Runs fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

struct BenchRow {
  std::size_t K = 0;
  double mean_ms = 0.0;
  double min_ms = 0.0;
  double mean_state = 0.0;
  std::size_t max_state = 0;
  double success_rate = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct BenchSummary {
  std::vector<BenchRow> rows;
  LinearFit time_fit;   // ms vs K
  LinearFit state_fit;  // state elements vs K
};

/// Decode timing at fixed (n, d, c) over a list of K; trials per K from cfg.
BenchSummary run_bench(const ExperimentConfig& cfg, const std::vector<std::size_t>& K_list);

struct ComparisonRow {
  std::size_t K = 0;
  double crt_unicolor = 0.0;
  double bb_unicolor = 0.0;
  double crt_multicolor = 0.0;
  double bb_multicolor = 0.0;
};

/// Paired full-recovery rates: CRT vs balls-and-bins with the same M, d, n and
/// identical signals per trial.
std::vector<ComparisonRow> run_crt_comparison(const std::vector<std::uint64_t>& coprimes,
                                              const std::vector<std::size_t>& K_list,
                                              std::size_t trials, RngSeed seed,
                                              std::size_t threads);

struct ConcentrationSummary {
  std::size_t K = 0;
  std::size_t trials = 0;
  std::size_t sweeps = 0;
  double mean_p2 = 0.0;           // simulated uncolored fraction after the merge phase
  double mean_uncolored = 0.0;    // after `sweeps` sweeps
  double sample_se = 0.0;
  double binomial_se = 0.0;
  double se = 0.0;
  double de_value = 0.0;          // DE trajectory seeded at mean_p2, `sweeps` steps
  double z = 0.0;
};

ConcentrationSummary run_concentration(const ExperimentConfig& cfg, std::size_t sweeps);

}  // namespace phasecode
