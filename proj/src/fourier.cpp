#include "phasecode/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "phasecode/fft.hpp"

namespace phasecode {

const char* to_string(StageVariant v) {
  switch (v) {
    case StageVariant::Plain: return "plain";
    case StageVariant::ShiftFwd: return "shift_fwd";
    case StageVariant::ShiftBwd: return "shift_bwd";
    case StageVariant::Cosine: return "cosine";
    case StageVariant::Check: return "check";
  }
  return "unknown";
}

const char* to_string(Algorithm a) {
  return a == Algorithm::Unicolor ? "unicolor" : "multicolor";
}

ExperimentCost experiment_cost(StageVariant v) {
  if (v == StageVariant::Cosine) return {2, 3};
  return {1, 1};
}

MaskLensPlan MaskLensPlan::build(const CodeEnsemble& crt, std::uint64_t check_shift) {
  if (crt.kind() != EnsembleKind::Crt) throw ParameterError("mask/lens plan needs a CRT ensemble");
  if (crt.alpha() != 1) throw ParameterError("mask/lens plan supports alpha = 1 only");
  if (crt.n() > kMaxPhysicalN) throw ParameterError("mask/lens plan: n too large for length-n FFTs");
  MaskLensPlan p;
  p.n = crt.n();
  p.heights = crt.stage_heights();
  p.check_shift = check_shift % p.n;
  const std::size_t n = static_cast<std::size_t>(p.n);
  for (auto f : p.heights) {
    const std::size_t period = n / f;
    std::vector<double> m(n, 0.0);
    for (std::size_t t = 0; t < n; t += period) m[t] = static_cast<double>(period);
    p.masks.push_back(std::move(m));
  }
  p.cosine.resize(n);
  for (std::size_t k = 0; k < n; ++k)
    p.cosine[k] = 2.0 * std::cos(2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));
  return p;
}

std::vector<Complex> mask_lens_field(std::span<const Complex> x, std::span<const double> mask) {
  if (mask.size() != x.size()) throw ParameterError("mask_lens: mask length mismatch");
  std::vector<Complex> v(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) v[t] = mask[t] * x[t];
  return dft(v);
}

std::vector<double> mask_lens_measure(std::span<const Complex> x, std::span<const double> mask) {
  const auto field = mask_lens_field(x, mask);
  std::vector<double> out(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) out[i] = std::abs(field[i]);
  return out;
}

std::vector<Complex> circulant_apply(std::uint64_t f, std::span<const Complex> v) {
  const std::size_t n = v.size();
  if (f == 0 || n % f != 0) throw ParameterError("circulant_apply: f must divide n");
  std::vector<Complex> residue(f);
  for (std::size_t k = 0; k < n; ++k) residue[k % f] += v[k];
  std::vector<Complex> out(n);
  for (std::size_t r = 0; r < n; ++r) out[r] = residue[r % f];
  return out;
}

std::vector<Complex> circular_shift(std::span<const Complex> x, std::int64_t s) {
  const auto n = static_cast<std::int64_t>(x.size());
  std::vector<Complex> out(x.size());
  if (n == 0) return out;
  const std::int64_t sh = ((s % n) + n) % n;
  for (std::int64_t t = 0; t < n; ++t) out[t] = x[(t + sh) % n];
  return out;
}

std::vector<double> stage_output(const MaskLensPlan& plan, std::span<const Complex> x,
                                 std::size_t stage, StageVariant variant) {
  if (stage >= plan.masks.size()) throw ParameterError("stage index out of range");
  if (x.size() != plan.n) throw ParameterError("stage_output: signal length mismatch");
  const auto& mask = plan.masks[stage];
  switch (variant) {
    case StageVariant::Plain: return mask_lens_measure(x, mask);
    case StageVariant::ShiftFwd: return mask_lens_measure(circular_shift(x, 1), mask);
    case StageVariant::ShiftBwd: return mask_lens_measure(circular_shift(x, -1), mask);
    case StageVariant::Check:
      return mask_lens_measure(circular_shift(x, static_cast<std::int64_t>(plan.check_shift)),
                               mask);
    case StageVariant::Cosine: {
      // Lens, cosine mask, lens, stage mask, lens: n |C P (D X)| with P k -> -k.
      auto X = dft(x);
      for (std::size_t k = 0; k < X.size(); ++k) X[k] *= plan.cosine[k];
      const auto Z = dft(X);
      const auto W = mask_lens_field(Z, mask);
      const std::size_t n = W.size();
      std::vector<double> out(n);
      const double inv_n = 1.0 / static_cast<double>(n);
      for (std::size_t r = 0; r < n; ++r) out[r] = std::abs(W[(n - r) % n]) * inv_n;
      return out;
    }
  }
  throw ParameterError("unknown stage variant");
}

std::vector<double> acquire_stage(const MaskLensPlan& plan, std::span<const Complex> x,
                                  std::size_t stage, StageVariant variant) {
  const auto out = stage_output(plan, x, stage, variant);
  const std::size_t f = plan.heights[stage];
  double scale = 1.0;
  for (double v : out) scale = std::max(scale, v);
  for (std::size_t i = f; i < out.size(); ++i)
    if (std::abs(out[i] - out[i % f]) > 1e-9 * scale)
      throw std::logic_error("acquire_stage: replica property violated");
  return std::vector<double>(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(f));
}

std::vector<Complex> spectrum_to_time(const SparseSignal& spectrum) {
  if (spectrum.n() > kMaxPhysicalN) throw ParameterError("spectrum_to_time: n too large");
  std::vector<Complex> X(static_cast<std::size_t>(spectrum.n()));
  for (const auto& c : spectrum.support()) X[c.index - 1] = c.value;
  return idft(X);
}

namespace {

void require_ff(const CodeEnsemble& crt, const ModulationParams& params) {
  if (crt.kind() != EnsembleKind::Crt)
    throw ParameterError("Fourier-friendly mode requires a CRT ensemble");
  if (params.mode != ModulationMode::Periodic)
    throw ParameterError("Fourier-friendly mode requires periodic modulation");
}

}  // namespace

MeasurementSet ff_sparse_acquire_physical(const SparseSignal& spectrum, const CodeEnsemble& crt,
                                          const ModulationParams& params) {
  require_ff(crt, params);
  if (spectrum.n() != crt.n() || params.n != crt.n())
    throw ParameterError("ff_sparse_acquire: dimension mismatch");
  const auto plan = MaskLensPlan::build(crt, params.L);
  const auto x = spectrum_to_time(spectrum);
  MeasurementSet m;
  m.params = params;
  m.bins.resize(crt.num_bins());
  const StageVariant rows[4] = {StageVariant::ShiftFwd, StageVariant::ShiftBwd,
                                StageVariant::Cosine, StageVariant::Check};
  std::size_t offset = 0;
  for (std::size_t j = 0; j < plan.heights.size(); ++j) {
    for (int k = 0; k < 4; ++k) {
      const auto y = acquire_stage(plan, x, j, rows[k]);
      for (std::size_t r = 0; r < y.size(); ++r) m.bins[offset + r][k] = y[r];
    }
    offset += plan.heights[j];
  }
  return m;
}

MeasurementSet ff_sparse_acquire(const SparseSignal& spectrum, const CodeEnsemble& crt,
                                 const ModulationParams& params) {
  require_ff(crt, params);
  if (crt.n() <= kMaxPhysicalN && crt.alpha() == 1)
    return ff_sparse_acquire_physical(spectrum, crt, params);
  return encode(spectrum, crt, params);
}

DecodeResult ff_sparse_decode(const MeasurementSet& meas, const CodeEnsemble& crt,
                              std::size_t K_hint, Algorithm algorithm,
                              const DecodeOptions& options) {
  require_ff(crt, meas.params);
  return algorithm == Algorithm::Unicolor ? decode_unicolor(meas, crt, K_hint, options)
                                          : decode_multicolor(meas, crt, K_hint, options);
}

namespace {

double max_abs(std::span<const Complex> v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace

std::vector<IdentityCheck> ff_verify(std::span<const std::uint64_t> coprimes, std::size_t trials,
                                     RngSeed seed, double tol) {
  const auto crt = CodeEnsemble::crt(coprimes, 1);
  const std::size_t n = static_cast<std::size_t>(crt.n());
  std::mt19937_64 rng(seed.value);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto params = ModulationParams::draw(crt.n(), derive_seed(seed, 0xff),
                                             ModulationMode::Periodic);
  const auto plan = MaskLensPlan::build(crt, params.L);

  IdentityCheck circ{"circulant_diagonalization", crt.n()};
  IdentityCheck replica{"replica_property", crt.n()};
  IdentityCheck perm{"f2_permutation", crt.n()};
  IdentityCheck cosine{"cosine_cascade", crt.n()};
  IdentityCheck binary{"mask_binary", crt.n()};
  IdentityCheck equiv{"analytic_equivalence", crt.n()};

  for (std::size_t j = 0; j < plan.masks.size(); ++j) {
    const double scale = static_cast<double>(n / plan.heights[j]);
    for (double m : plan.masks[j]) {
      const double b = m / scale;
      binary.max_residual = std::max(binary.max_residual, std::min(std::abs(b), std::abs(b - 1.0)));
    }
  }
  binary.trials = 1;

  for (std::size_t trial = 0; trial < trials; ++trial) {
    std::vector<Complex> x(n);
    for (auto& v : x) v = Complex(gauss(rng), gauss(rng));
    const auto X = dft(x);

    // F^2 = n P with (P v)_k = v_{-k mod n}.
    const auto FF = dft(X);
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      worst = std::max(worst, std::abs(FF[k] - static_cast<double>(n) * x[(n - k) % n]));
    perm.max_residual =
        std::max(perm.max_residual, worst / (static_cast<double>(n) * std::max(1.0, max_abs(x))));
    ++perm.trials;

    for (std::size_t j = 0; j < plan.masks.size(); ++j) {
      const auto f = plan.heights[j];
      const auto lhs = mask_lens_field(x, plan.masks[j]);
      const auto rhs = circulant_apply(f, X);
      double w = 0.0;
      for (std::size_t k = 0; k < n; ++k) w = std::max(w, std::abs(lhs[k] - rhs[k]));
      circ.max_residual = std::max(circ.max_residual, w / std::max(1.0, max_abs(rhs)));

      for (auto variant : {StageVariant::Plain, StageVariant::ShiftFwd, StageVariant::ShiftBwd,
                           StageVariant::Cosine, StageVariant::Check}) {
        const auto out = stage_output(plan, x, j, variant);
        double scale = 1.0;
        for (double v : out) scale = std::max(scale, v);
        double r = 0.0;
        for (std::size_t i = f; i < n; ++i) r = std::max(r, std::abs(out[i] - out[i % f]));
        replica.max_residual = std::max(replica.max_residual, r / scale);
      }

      std::vector<Complex> DX(n);
      for (std::size_t k = 0; k < n; ++k) DX[k] = plan.cosine[k] * X[k];
      const auto ref = circulant_apply(f, DX);
      const auto out = stage_output(plan, x, j, StageVariant::Cosine);
      double c = 0.0;
      for (std::size_t k = 0; k < n; ++k) c = std::max(c, std::abs(out[k] - std::abs(ref[k])));
      cosine.max_residual = std::max(cosine.max_residual, c / std::max(1.0, max_abs(ref)));
    }
    ++circ.trials;
    ++replica.trials;
    ++cosine.trials;

    // Sparse spectrum: physical acquisition equals the analytic encoder.
    const std::size_t K = std::min<std::size_t>(n, 3 + trial % 5);
    const auto spec = generate_signal(crt.n(), K, derive_seed(seed, 1000 + trial));
    const auto phys = ff_sparse_acquire_physical(spec, crt, params);
    const auto ana = encode(spec, crt, params);
    double e = 0.0;
    double s = 1.0;
    for (std::size_t b = 0; b < ana.bins.size(); ++b)
      for (int k = 0; k < 4; ++k) {
        e = std::max(e, std::abs(phys.bins[b][k] - ana.bins[b][k]));
        s = std::max(s, ana.bins[b][k]);
      }
    equiv.max_residual = std::max(equiv.max_residual, e / s);
    ++equiv.trials;
  }

  std::vector<IdentityCheck> out{circ, replica, perm, cosine, binary, equiv};
  for (auto& c : out) c.passed = c.max_residual <= tol;
  return out;
}

}  // namespace phasecode
