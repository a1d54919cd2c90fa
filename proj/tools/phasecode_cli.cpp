// phasecode command line: design tables, Monte Carlo runs, benchmarks and
// file-based encode/decode.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phasecode/analysis.hpp"
#include "phasecode/core.hpp"
#include "phasecode/decoder.hpp"
#include "phasecode/ensemble.hpp"
#include "phasecode/experiment.hpp"
#include "phasecode/fourier.hpp"
#include "phasecode/measurement.hpp"
#include "phasecode/nonsparse.hpp"

using namespace phasecode;

namespace {

constexpr int kConfigError = 2;
constexpr int kCheckFailed = 3;

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Writes to --out when given, else stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ParameterError("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void write_header(std::ostream& os, const std::string& command, const KeyValues& kv) {
  os << "# command=" << command << "\n";
  for (const auto& [k, v] : kv) os << "# " << k << "=" << v << "\n";
}

// "4..10" or "4,5,7".
std::vector<std::size_t> parse_list(const std::string& text) {
  std::vector<std::size_t> out;
  const auto dots = text.find("..");
  try {
    if (dots != std::string::npos) {
      const std::size_t lo = std::stoull(text.substr(0, dots));
      const std::size_t hi = std::stoull(text.substr(dots + 2));
      if (hi < lo) throw ParameterError("empty range: " + text);
      for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
      return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) out.push_back(std::stoull(item));
  } catch (const std::logic_error&) {
    throw ParameterError("malformed list: " + text);
  }
  if (out.empty()) throw ParameterError("empty list: " + text);
  return out;
}

std::vector<std::uint64_t> to_u64(const std::vector<std::size_t>& v) {
  return {v.begin(), v.end()};
}

struct CommonFlags {
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::string out;
  std::size_t threads = 1;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", "key=value file with this subcommand's options");
  app->add_option("--seed", f.seed, "master seed");
  app->add_option("--trials", f.trials, "number of trials");
  app->add_option("--out", f.out, "output CSV (default stdout)");
  app->add_option("--threads", f.threads, "worker threads");
}

struct CodeFlags {
  std::string ensemble = "balls";
  std::size_t d = 7;
  std::size_t bins = 0;
  double c = 0.0;
  std::string coprimes;
  unsigned alpha = 1;
  Index n = 1000000;
  std::size_t K = 100;
  std::string algorithm = "unicolor";
  std::string modulation = "standard";
  std::size_t max_sweeps = 0;
  double tau = kDefaultTau;
  double threshold = -1.0;
};

void add_code(CLI::App* app, CodeFlags& f) {
  app->add_option("--ensemble", f.ensemble, "balls|crt")->check(CLI::IsMember({"balls", "crt"}));
  app->add_option("--d", f.d, "left degree");
  app->add_option("--bins", f.bins, "number of bins M");
  app->add_option("--c", f.c, "bins per nonzero, M = ceil(cK)");
  app->add_option("--coprimes", f.coprimes, "CRT stage sizes, e.g. 47,49,50");
  app->add_option("--alpha", f.alpha, "CRT stacking factor");
  app->add_option("--n", f.n, "signal length");
  app->add_option("--K", f.K, "sparsity");
  app->add_option("--algorithm", f.algorithm, "unicolor|multicolor")
      ->check(CLI::IsMember({"unicolor", "multicolor"}));
  app->add_option("--modulation", f.modulation, "standard|periodic")
      ->check(CLI::IsMember({"standard", "periodic"}));
  app->add_option("--max-sweeps", f.max_sweeps, "sweep cap (0 = automatic)");
  app->add_option("--tau", f.tau, "relative residual threshold");
  app->add_option("--success-threshold", f.threshold, "required recovered fraction");
}

ExperimentConfig make_config(const CodeFlags& f, const CommonFlags& c) {
  ExperimentConfig cfg;
  cfg.n = f.n;
  cfg.K = f.K;
  cfg.d = f.d;
  cfg.c = f.c;
  cfg.bins = f.bins;
  cfg.ensemble = f.ensemble == "crt" ? EnsembleKind::Crt : EnsembleKind::BallsAndBins;
  if (!f.coprimes.empty()) cfg.coprimes = to_u64(parse_list(f.coprimes));
  cfg.alpha = f.alpha;
  cfg.algorithm = f.algorithm == "multicolor" ? Algorithm::Multicolor : Algorithm::Unicolor;
  cfg.modulation = f.modulation == "periodic" ? ModulationMode::Periodic : ModulationMode::Standard;
  cfg.trials = c.trials;
  cfg.seed = RngSeed{c.seed};
  cfg.success_threshold = f.threshold;
  cfg.threads = c.threads;
  cfg.max_sweeps = f.max_sweeps;
  cfg.tau = f.tau;
  cfg.validate();
  return cfg;
}

void write_records(const std::string& path, const ExperimentConfig& cfg,
                   const SimulationSummary& s) {
  std::ofstream os(path);
  if (!os) throw ParameterError("cannot open records file: " + path);
  write_header(os, "records", cfg.to_kv());
  os << "trial,seed,status,fraction_recovered,success,sweeps,wall_time_ms\n";
  for (const auto& r : s.records)
    os << r.trial << ',' << r.seed << ',' << to_string(r.status) << ','
       << format_double(r.fraction_recovered) << ',' << (r.success ? 1 : 0) << ',' << r.sweeps
       << ',' << format_double(r.wall_time_ms) << '\n';
}

void write_summary(std::ostream& os, const SimulationSummary& s) {
  os << "trials,failures,error_probability,ci_lo,ci_hi,mean_fraction,threshold\n";
  os << s.trials << ',' << s.failures << ',' << format_double(s.error_probability) << ','
     << format_double(s.ci.lo) << ',' << format_double(s.ci.hi) << ','
     << format_double(s.mean_fraction) << ',' << format_double(s.threshold) << '\n';
}

int cmd_design(const std::string& d_list, const CommonFlags& common) {
  std::vector<unsigned> ds;
  for (auto d : parse_list(d_list)) ds.push_back(static_cast<unsigned>(d));
  const auto rows = design_table(ds);
  Output out(common.out);
  auto& os = out.stream();
  write_header(os, "design", {{"d", d_list}});
  os << "d,c_min,c_max,lambda_min,lambda_max,p_star,m_per_K\n";
  for (const auto& r : rows) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%u,%.2f,%.2f,%.4f,%.4f,%.3g,%.2f\n", r.d, r.c_min, r.c_max,
                  r.lambda_min, r.lambda_max, r.p_star, r.m_per_K);
    os << buf;
  }
  return 0;
}

int cmd_simulate(const CodeFlags& code, const CommonFlags& common, const std::string& records) {
  const auto cfg = make_config(code, common);
  const auto s = run_simulation(cfg);
  Output out(common.out);
  write_header(out.stream(), "simulate", cfg.to_kv());
  write_summary(out.stream(), s);
  if (!records.empty()) write_records(records, cfg, s);
  return 0;
}

int cmd_bench(const CodeFlags& code, const CommonFlags& common, const std::string& k_list) {
  const auto cfg = make_config(code, common);
  const auto b = run_bench(cfg, parse_list(k_list));
  Output out(common.out);
  auto& os = out.stream();
  auto kv = cfg.to_kv();
  // K and M vary per row; the single-K values would be misleading.
  std::erase_if(kv, [](const auto& p) { return p.first == "K" || p.first == "M"; });
  kv.emplace_back("K_list", k_list);
  write_header(os, "bench", kv);
  os << "K,mean_ms,min_ms,mean_state,max_state,success_rate\n";
  for (const auto& r : b.rows)
    os << r.K << ',' << format_double(r.mean_ms) << ',' << format_double(r.min_ms) << ','
       << format_double(r.mean_state) << ',' << r.max_state << ',' << format_double(r.success_rate) << '\n';
  os << "# time_slope_ms_per_K=" << format_double(b.time_fit.slope)
     << " time_r2=" << format_double(b.time_fit.r2) << "\n";
  os << "# state_slope=" << format_double(b.state_fit.slope)
     << " state_intercept=" << format_double(b.state_fit.intercept)
     << " state_r2=" << format_double(b.state_fit.r2) << "\n";
  return 0;
}

CodeEnsemble ensemble_for_files(const CodeFlags& code, const CommonFlags& common, Index n) {
  if (code.ensemble == "crt") {
    if (code.coprimes.empty()) throw ParameterError("--coprimes required for crt");
    return CodeEnsemble::crt(to_u64(parse_list(code.coprimes)), code.alpha);
  }
  const std::size_t M =
      code.bins ? code.bins : static_cast<std::size_t>(std::ceil(code.c * code.K));
  if (M == 0) throw ParameterError("--bins or --c required");
  return CodeEnsemble::balls_and_bins(n, M, code.d, derive_seed(RngSeed{common.seed}, 2));
}

// Generates (or reads) a signal and writes it with its measurements.
int cmd_encode(const CodeFlags& code, const CommonFlags& common, const std::string& signal_in,
               const std::string& signal_out, const std::string& meas_out) {
  const RngSeed master{common.seed};
  SparseSignal signal;
  CodeEnsemble ens;
  if (!signal_in.empty()) {
    signal = read_signal(signal_in);
    CodeFlags c = code;
    c.K = signal.sparsity();
    ens = ensemble_for_files(c, common, signal.n());
  } else {
    ens = ensemble_for_files(code, common, code.n);
    signal = generate_signal(ens.n(), code.K, derive_seed(master, 1));
  }
  if (ens.n() != signal.n()) throw ParameterError("signal length does not match the ensemble");
  const auto mode = code.modulation == "periodic" ? ModulationMode::Periodic
                                                  : ModulationMode::Standard;
  const auto params = ModulationParams::draw(signal.n(), derive_seed(master, 3), mode);
  const auto meas = encode(signal, ens, params);
  if (signal_in.empty()) write_signal(signal_out, signal);
  write_measurements(meas_out, meas);
  std::cout << "# " << ens.describe() << "\n";
  std::cout << "wrote " << meas.scalar_count() << " measurements over " << meas.num_bins()
            << " bins\n";
  return 0;
}

int cmd_decode(const CodeFlags& code, const CommonFlags& common, const std::string& signal_in,
               const std::string& meas_in) {
  const auto meas = read_measurements(meas_in);
  std::size_t K_hint = code.K;
  SparseSignal truth;
  const bool scored = !signal_in.empty();
  if (scored) {
    truth = read_signal(signal_in);
    K_hint = truth.sparsity();
  }
  CodeFlags c = code;
  c.K = K_hint;
  const auto ens = ensemble_for_files(c, common, meas.params.n);
  if (ens.num_bins() != meas.num_bins())
    throw ParameterError("measurement file does not match the ensemble");
  DecodeOptions opt;
  opt.tau = code.tau;
  opt.max_sweeps = code.max_sweeps;

  const auto t0 = std::chrono::steady_clock::now();
  const auto result = code.algorithm == "multicolor" ? decode_multicolor(meas, ens, K_hint, opt)
                                                     : decode_unicolor(meas, ens, K_hint, opt);
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  Output out(common.out);
  auto& os = out.stream();
  write_header(os, "decode", {{"measurements", meas_in}, {"ensemble", ens.describe()},
                              {"algorithm", code.algorithm}, {"tau", format_double(opt.tau)}});
  for (const auto& comp : result.recovered)
    os << comp.index << ' ' << format_double(comp.value.real()) << ' '
       << format_double(comp.value.imag()) << '\n';
  double fraction = result.fraction_recovered;
  if (scored && truth.sparsity() > 0)
    fraction = static_cast<double>(count_correct(result.recovered, truth)) /
               static_cast<double>(truth.sparsity());
  nlohmann::json status = {{"status", to_string(result.status)},
                           {"iterations", result.iterations},
                           {"fraction_recovered", fraction},
                           {"wall_time_ms", ms}};
  os << status.dump() << '\n';
  return 0;
}

std::vector<Complex> random_dense(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  std::vector<Complex> x(n);
  for (auto& v : x) v = Complex(g(rng), g(rng));
  return x;
}

double relative_residual(const std::vector<Complex>& est, const std::vector<Complex>& x) {
  // Align on the largest entry, then take the worst relative error.
  std::size_t j = 0;
  for (std::size_t i = 1; i < x.size(); ++i)
    if (std::abs(x[i]) > std::abs(x[j])) j = i;
  const Complex rot = x[j] / est[j] * std::abs(est[j]) / std::abs(x[j]);
  double norm = 0.0, err = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    norm = std::max(norm, std::abs(x[i]));
    err = std::max(err, std::abs(rot * est[i] - x[i]));
  }
  return err / norm;
}

int cmd_nonsparse(const std::string& mode, std::size_t n, bool self_test, const std::string& dump,
                  const CommonFlags& common) {
  if (n < 2) throw ParameterError("--n must be at least 2");
  std::mt19937_64 rng(derive_seed(RngSeed{common.seed}, 1).value);
  const bool fourier = mode == "fourier";
  const std::size_t trials = self_test ? common.trials : 1;
  Output out(common.out);
  auto& os = out.stream();
  write_header(os, "nonsparse", {{"mode", mode}, {"n", std::to_string(n)},
                                 {"trials", std::to_string(trials)},
                                 {"seed", std::to_string(common.seed)}});
  os << "trial,measurements,residual\n";
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto x = random_dense(n, rng);
    std::vector<Complex> est;
    std::size_t count = 0;
    if (fourier) {
      const auto m = ff_nonsparse_measure(x);
      count = m.count();
      if (t == 0 && !dump.empty()) {
        std::ofstream d(dump);
        d << "# mode=fourier\n" << n << "\n";
        for (std::size_t k = 0; k < n; ++k)
          d << format_double(m.plain[k]) << ' ' << format_double(m.doubled[k]) << ' '
            << format_double(m.quadrature[k]) << '\n';
      }
      est = ff_nonsparse_decode(m);
    } else {
      const auto m = chain_measure(x);
      count = m.count();
      if (t == 0 && !dump.empty()) {
        std::ofstream d(dump);
        d << "# mode=general\n" << n << ' ' << format_double(m.omega) << ' ' << m.anchor << "\n";
        for (std::size_t l = 0; l < n; ++l) d << format_double(m.mags[l]) << '\n';
        for (std::size_t t2 = 0; t2 + 1 < n; ++t2)
          d << format_double(m.sums[t2]) << ' ' << format_double(m.rotated_sums[t2]) << '\n';
      }
      est = chain_decode(m);
    }
    const double r = relative_residual(est, x);
    worst = std::max(worst, r);
    os << t << ',' << count << ',' << format_double(r) << '\n';
  }
  os << "# max_residual=" << format_double(worst) << "\n";
  if (self_test && !(worst <= 1e-8)) return kCheckFailed;
  return 0;
}

int cmd_ff_verify(const std::string& coprimes, const CommonFlags& common, double tol) {
  const auto f = to_u64(parse_list(coprimes));
  const auto checks = ff_verify(f, common.trials, RngSeed{common.seed}, tol);
  Output out(common.out);
  auto& os = out.stream();
  write_header(os, "ff-verify", {{"coprimes", coprimes}, {"trials", std::to_string(common.trials)},
                                 {"seed", std::to_string(common.seed)},
                                 {"tol", format_double(tol)}});
  os << "check,n,max_residual,trials,result\n";
  bool ok = true;
  for (const auto& c : checks) {
    os << c.name << ',' << c.n << ',' << format_double(c.max_residual) << ',' << c.trials << ','
       << (c.passed ? "pass" : "FAIL") << '\n';
    ok = ok && c.passed;
  }
  return ok ? 0 : kCheckFailed;
}

int cmd_ff_sim(CodeFlags code, const CommonFlags& common, const std::string& records) {
  code.ensemble = "crt";
  code.modulation = "periodic";
  if (code.coprimes.empty()) code.coprimes = "47,49,50,53,57,59,61";
  const auto cfg = make_config(code, common);
  const auto s = run_simulation(cfg);
  Output out(common.out);
  write_header(out.stream(), "ff-sim", cfg.to_kv());
  write_summary(out.stream(), s);
  if (!records.empty()) write_records(records, cfg, s);
  return 0;
}

// Replaces "--config FILE" with the file's key=value lines as "--key=value"
// arguments, placed before the remaining command line so explicit flags win.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    std::size_t width = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      width = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      width = 1;
    } else {
      continue;
    }
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot read config file " + path);
    std::vector<std::string> expanded;
    std::string line;
    while (std::getline(in, line)) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#' || line[first] == ';' ||
          line[first] == '[')
        continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ParameterError("config line without '=': " + line);
      auto trim = [](std::string v) {
        const auto a = v.find_first_not_of(" \t\r\"");
        const auto b = v.find_last_not_of(" \t\r\"");
        return a == std::string::npos ? std::string() : v.substr(a, b - a + 1);
      };
      expanded.push_back("--" + trim(line.substr(first, eq - first)) + "=" +
                         trim(line.substr(eq + 1)));
    }
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
               args.begin() + static_cast<std::ptrdiff_t>(i + width));
    // Right after the subcommand name.
    std::size_t at = 0;
    while (at < args.size() && args[at].rfind("-", 0) == 0) ++at;
    at = std::min(at + 1, args.size());
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), expanded.begin(), expanded.end());
    break;
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phasecode: sparse phase retrieval codes and decoders"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  CommonFlags common;
  CodeFlags code;
  std::string records, d_list = "4..10", k_list = "1000,2000,4000,10000";
  std::string signal_in, signal_out = "signal.txt", meas_path = "measurements.txt";
  std::string ns_mode = "general", dump, ff_coprimes = "3,4,5";
  std::size_t ns_n = 256;
  bool self_test = false;
  double ff_tol = 1e-9;

  auto* design = app.add_subcommand("design", "design table from density evolution");
  design->add_option("--d", d_list, "degrees, e.g. 4..10");
  design->add_option("--out", common.out, "output CSV");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo error probability");
  add_common(simulate, common);
  add_code(simulate, code);
  simulate->add_option("--records", records, "per-trial CSV");

  auto* bench = app.add_subcommand("bench", "decode time and state versus K");
  add_common(bench, common);
  add_code(bench, code);
  bench->add_option("--K-list", k_list, "sparsities, e.g. 1000,2000");

  auto* enc = app.add_subcommand("encode", "write a signal and its measurements");
  add_common(enc, common);
  add_code(enc, code);
  enc->add_option("--signal", signal_in, "existing signal file (optional)");
  enc->add_option("--signal-out", signal_out, "generated signal file");
  enc->add_option("--measurements", meas_path, "measurement file to write");

  auto* dec = app.add_subcommand("decode", "decode a measurement file");
  add_common(dec, common);
  add_code(dec, code);
  dec->add_option("--signal", signal_in, "true signal, for K and scoring only");
  dec->add_option("--measurements", meas_path, "measurement file")->required();

  auto* ns = app.add_subcommand("nonsparse", "non-sparse 3n-2 / 3n schemes");
  add_common(ns, common);
  ns->add_option("--mode", ns_mode, "general|fourier")
      ->check(CLI::IsMember({"general", "fourier"}));
  ns->add_option("--n", ns_n, "signal length");
  ns->add_flag("--self-test", self_test, "round trip random signals (--trials of them)");
  ns->add_option("--dump", dump, "write the first trial's measurements");

  auto* ffv = app.add_subcommand("ff-verify", "mask/lens operator identities");
  add_common(ffv, common);
  ffv->add_option("--coprimes", ff_coprimes, "stage sizes");
  ffv->add_option("--tol", ff_tol, "residual bound");

  auto* ffs = app.add_subcommand("ff-sim", "Fourier-friendly sparse spectrum experiment");
  add_common(ffs, common);
  add_code(ffs, code);
  ffs->add_option("--records", records, "per-trial CSV");

  try {
    std::vector<std::string> args;
    try {
      args = expand_config(argc, argv);
    } catch (const ParameterError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kConfigError;
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*design) return cmd_design(d_list, common);
    if (*simulate) return cmd_simulate(code, common, records);
    if (*bench) return cmd_bench(code, common, k_list);
    if (*enc) return cmd_encode(code, common, signal_in, signal_out, meas_path);
    if (*dec) return cmd_decode(code, common, signal_in, meas_path);
    if (*ns) return cmd_nonsparse(ns_mode, ns_n, self_test, dump, common);
    if (*ffv) return cmd_ff_verify(ff_coprimes, common, ff_tol);
    if (*ffs) return cmd_ff_sim(code, common, records);
  } catch (const ParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
