#include "phasecode/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "phasecode/analysis.hpp"
#include "phasecode/measurement.hpp"

namespace phasecode {

std::size_t ExperimentConfig::num_bins() const {
  if (ensemble == EnsembleKind::Crt) {
    std::size_t total = 0;
    const std::size_t dd = coprimes.size();
    for (std::size_t i = 0; i < dd; ++i) {
      std::uint64_t h = 1;
      for (unsigned j = 0; j < alpha; ++j) h *= coprimes[(i + j) % dd];
      total += h;
    }
    return total;
  }
  if (bins) return bins;
  return static_cast<std::size_t>(std::ceil(c * static_cast<double>(K) - 1e-9));
}

Index ExperimentConfig::effective_n() const {
  if (ensemble != EnsembleKind::Crt) return n;
  Index p = 1;
  for (auto f : coprimes) p *= f;
  return p;
}

double ExperimentConfig::effective_threshold() const {
  if (success_threshold >= 0.0) return success_threshold;
  const std::size_t dd = ensemble == EnsembleKind::Crt ? coprimes.size() : d;
  const double cc = K ? static_cast<double>(num_bins()) / static_cast<double>(K) : 0.0;
  if (!(cc > 0.0)) return 1.0;
  const double p = error_floor(static_cast<double>(dd) / cc, static_cast<unsigned>(dd));
  // Outside the design region the floor is meaningless; demand full recovery.
  return p >= 1.0 ? 1.0 : 1.0 - p;
}

void ExperimentConfig::validate() const {
  if (ensemble == EnsembleKind::Explicit)
    throw ParameterError("config: explicit ensembles are not available in experiments");
  if (ensemble == EnsembleKind::Crt) {
    if (coprimes.empty()) throw ParameterError("config: --coprimes required for crt ensemble");
    (void)CodeEnsemble::crt(coprimes, alpha);
  } else {
    if (d < 1) throw ParameterError("config: d must be positive");
    if (bins == 0 && !(c > 0.0)) throw ParameterError("config: give --bins or --c");
    if (num_bins() < d) throw ParameterError("config: d > M");
    if (n < 2) throw ParameterError("config: n must be at least 2");
  }
  if (K > effective_n()) throw ParameterError("config: K > n");
  if (modulation == ModulationMode::Periodic && ensemble != EnsembleKind::Crt)
    throw ParameterError("config: Fourier-friendly mode requires the crt ensemble");
  if (!(tau > 0.0)) throw ParameterError("config: tau must be positive");
  if (threads == 0) throw ParameterError("config: threads must be positive");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::to_kv() const {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("n", std::to_string(effective_n()));
  kv.emplace_back("K", std::to_string(K));
  kv.emplace_back("ensemble", to_string(ensemble));
  if (ensemble == EnsembleKind::Crt) {
    std::string s;
    for (std::size_t i = 0; i < coprimes.size(); ++i)
      s += (i ? "," : "") + std::to_string(coprimes[i]);
    kv.emplace_back("coprimes", s);
    kv.emplace_back("alpha", std::to_string(alpha));
    kv.emplace_back("d", std::to_string(coprimes.size()));
  } else {
    kv.emplace_back("d", std::to_string(d));
    kv.emplace_back("c", format_double(c));
  }
  kv.emplace_back("M", std::to_string(num_bins()));
  kv.emplace_back("algorithm", to_string(algorithm));
  kv.emplace_back("modulation", modulation == ModulationMode::Standard ? "standard" : "periodic");
  kv.emplace_back("trials", std::to_string(trials));
  kv.emplace_back("seed", std::to_string(seed.value));
  kv.emplace_back("success_threshold", format_double(effective_threshold()));
  kv.emplace_back("max_sweeps", std::to_string(max_sweeps));
  kv.emplace_back("tau", format_double(tau));
  kv.emplace_back("threads", std::to_string(threads));
  return kv;
}

CodeEnsemble make_ensemble(const ExperimentConfig& cfg, RngSeed trial_seed) {
  if (cfg.ensemble == EnsembleKind::Crt) return CodeEnsemble::crt(cfg.coprimes, cfg.alpha);
  return CodeEnsemble::balls_and_bins(cfg.n, cfg.num_bins(), cfg.d, derive_seed(trial_seed, 2));
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t trial) {
  TrialRecord rec;
  rec.trial = trial;
  const RngSeed ts = derive_seed(cfg.seed, trial);
  rec.seed = ts.value;
  const auto ens = make_ensemble(cfg, ts);
  const auto signal = generate_signal(ens.n(), cfg.K, derive_seed(ts, 1));
  const auto params = ModulationParams::draw(ens.n(), derive_seed(ts, 3), cfg.modulation);
  const MeasurementSet meas = cfg.modulation == ModulationMode::Periodic
                                  ? ff_sparse_acquire(signal, ens, params)
                                  : encode(signal, ens, params);
  DecodeOptions opt;
  opt.tau = cfg.tau;
  opt.max_sweeps = cfg.max_sweeps;
  const auto t0 = std::chrono::steady_clock::now();
  const DecodeResult res = cfg.algorithm == Algorithm::Unicolor
                               ? decode_unicolor(meas, ens, cfg.K, opt)
                               : decode_multicolor(meas, ens, cfg.K, opt);
  const auto t1 = std::chrono::steady_clock::now();
  rec.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  rec.status = res.status;
  const std::size_t correct = res.recovered.empty() ? 0 : count_correct(res.recovered, signal);
  rec.fraction_recovered =
      cfg.K ? static_cast<double>(correct) / static_cast<double>(cfg.K) : 1.0;
  rec.success = rec.fraction_recovered >= cfg.effective_threshold() - 1e-12;
  rec.sweeps = res.colored_after_sweep.size();
  rec.giant_after_merge = res.giant_after_merge;
  rec.peak_state = res.peak_state_elements;
  rec.colored_after_sweep = res.colored_after_sweep;
  return rec;
}

Interval wilson_interval(std::size_t failures, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double nt = static_cast<double>(trials);
  const double p = static_cast<double>(failures) / nt;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nt;
  const double center = (p + z2 / (2.0 * nt)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nt + z2 / (4.0 * nt * nt)) / denom;
  // The bounds are exact at the extremes; rounding would otherwise leave 1e-18 residue.
  return {failures == 0 ? 0.0 : std::max(0.0, center - half),
          failures == trials ? 1.0 : std::min(1.0, center + half)};
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (std::size_t w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

SimulationSummary run_simulation(const ExperimentConfig& cfg) {
  cfg.validate();
  SimulationSummary s;
  s.trials = cfg.trials;
  s.threshold = cfg.effective_threshold();
  s.records.resize(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) { s.records[i] = run_trial(cfg, i); });
  double frac = 0.0;
  for (const auto& r : s.records) {
    if (!r.success) ++s.failures;
    frac += r.fraction_recovered;
  }
  if (s.trials) {
    s.error_probability = static_cast<double>(s.failures) / static_cast<double>(s.trials);
    s.mean_fraction = frac / static_cast<double>(s.trials);
  }
  s.ci = wilson_interval(s.failures, s.trials);
  return s;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit f;
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return f;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

BenchSummary run_bench(const ExperimentConfig& base, const std::vector<std::size_t>& K_list) {
  if (base.ensemble == EnsembleKind::Explicit)
    throw ParameterError("bench: implicit ensembles only");
  BenchSummary out;
  std::vector<double> ks, ms, states;
  for (std::size_t K : K_list) {
    ExperimentConfig cfg = base;
    cfg.K = K;
    cfg.validate();
    BenchRow row;
    row.K = K;
    std::vector<TrialRecord> recs(cfg.trials);
    // Sequential on purpose: timings must not contend for cores.
    for (std::size_t t = 0; t < cfg.trials; ++t) recs[t] = run_trial(cfg, t);
    double ok = 0;
    row.min_ms = recs.empty() ? 0.0 : recs.front().wall_time_ms;
    for (const auto& r : recs) {
      row.mean_ms += r.wall_time_ms;
      row.min_ms = std::min(row.min_ms, r.wall_time_ms);
      row.mean_state += static_cast<double>(r.peak_state);
      row.max_state = std::max(row.max_state, r.peak_state);
      ok += r.success ? 1.0 : 0.0;
    }
    if (cfg.trials) {
      row.mean_ms /= cfg.trials;
      row.mean_state /= cfg.trials;
      row.success_rate = ok / cfg.trials;
    }
    out.rows.push_back(row);
    ks.push_back(static_cast<double>(K));
    // Fastest trial per size: preemption only ever adds time.
    ms.push_back(row.min_ms);
    states.push_back(row.mean_state);
  }
  out.time_fit = fit_line(ks, ms);
  out.state_fit = fit_line(ks, states);
  return out;
}

std::vector<ComparisonRow> run_crt_comparison(const std::vector<std::uint64_t>& coprimes,
                                              const std::vector<std::size_t>& K_list,
                                              std::size_t trials, RngSeed seed,
                                              std::size_t threads) {
  const auto crt = CodeEnsemble::crt(coprimes, 1);
  const Index n = crt.n();
  const std::size_t M = crt.num_bins();
  const std::size_t d = coprimes.size();
  std::vector<ComparisonRow> rows;
  for (std::size_t K : K_list) {
    if (K > n) throw ParameterError("crt comparison: K > n");
    struct Outcome {
      bool cu, bu, cm, bm;
    };
    std::vector<Outcome> out(trials);
    const RngSeed kseed = derive_seed(seed, K);
    parallel_for(trials, threads, [&](std::size_t t) {
      const RngSeed ts = derive_seed(kseed, t);
      const auto signal = generate_signal(n, K, derive_seed(ts, 1));
      const auto params = ModulationParams::draw(n, derive_seed(ts, 3));
      const auto bb = CodeEnsemble::balls_and_bins(n, M, d, derive_seed(ts, 2));
      const auto mc = encode(signal, crt, params);
      const auto mb = encode(signal, bb, params);
      const auto full = [&](const DecodeResult& r) {
        return r.recovered.size() == K && count_correct(r.recovered, signal) == K;
      };
      out[t] = {full(decode_unicolor(mc, crt, K)), full(decode_unicolor(mb, bb, K)),
                full(decode_multicolor(mc, crt, K)), full(decode_multicolor(mb, bb, K))};
    });
    ComparisonRow row;
    row.K = K;
    for (const auto& o : out) {
      row.crt_unicolor += o.cu;
      row.bb_unicolor += o.bu;
      row.crt_multicolor += o.cm;
      row.bb_multicolor += o.bm;
    }
    if (trials) {
      const double t = static_cast<double>(trials);
      row.crt_unicolor /= t;
      row.bb_unicolor /= t;
      row.crt_multicolor /= t;
      row.bb_multicolor /= t;
    }
    rows.push_back(row);
  }
  return rows;
}

ConcentrationSummary run_concentration(const ExperimentConfig& base, std::size_t sweeps) {
  ExperimentConfig cfg = base;
  cfg.algorithm = Algorithm::Unicolor;
  cfg.max_sweeps = sweeps;
  cfg.validate();
  std::vector<TrialRecord> recs(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) { recs[i] = run_trial(cfg, i); });

  ConcentrationSummary s;
  s.K = cfg.K;
  s.trials = cfg.trials;
  s.sweeps = sweeps;
  const double K = static_cast<double>(cfg.K);
  std::vector<double> unc;
  for (const auto& r : recs) {
    s.mean_p2 += 1.0 - static_cast<double>(r.giant_after_merge) / K;
    // Coloring stops early once nothing changes; the count then stays put.
    const std::size_t colored =
        r.colored_after_sweep.empty() ? r.giant_after_merge : r.colored_after_sweep.back();
    unc.push_back(1.0 - static_cast<double>(colored) / K);
  }
  const double T = static_cast<double>(cfg.trials);
  s.mean_p2 /= T;
  for (double u : unc) s.mean_uncolored += u;
  s.mean_uncolored /= T;
  double var = 0.0;
  for (double u : unc) var += (u - s.mean_uncolored) * (u - s.mean_uncolored);
  var /= std::max(1.0, T - 1.0);
  s.sample_se = std::sqrt(var / T);
  const double d = static_cast<double>(cfg.d);
  const double lambda = d / (static_cast<double>(cfg.num_bins()) / K);
  const auto traj = de_trajectory(s.mean_p2, lambda, static_cast<unsigned>(cfg.d), sweeps);
  s.de_value = traj.back();
  s.binomial_se = std::sqrt(s.de_value * (1.0 - s.de_value) / (K * T));
  s.se = std::sqrt(s.sample_se * s.sample_se + s.binomial_se * s.binomial_se);
  s.z = s.se > 0.0 ? (s.mean_uncolored - s.de_value) / s.se : 0.0;
  return s;
}

}  // namespace phasecode
