#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "phasecode/core.hpp"
#include "phasecode/decoder.hpp"
#include "phasecode/ensemble.hpp"
#include "phasecode/measurement.hpp"

namespace phasecode {

/// Physical variants of one stage. ShiftFwd/ShiftBwd/Cosine/Check realize the
/// four modulation rows with omega_eff = 2 pi / n; Plain is the bare stage.
enum class StageVariant { Plain, ShiftFwd, ShiftBwd, Cosine, Check };

const char* to_string(StageVariant v);

struct ExperimentCost {
  int masks = 0;
  int lenses = 0;
};

ExperimentCost experiment_cost(StageVariant v);

/// Mask/lens realization of a CRT ensemble (alpha = 1) on length-n signals.
///
/// Index convention: time t and frequency k both run over 0..n-1; spectral
/// component k is ball l = k + 1, so stage j's bin for it is k mod f_j.
struct MaskLensPlan {
  Index n = 0;
  std::vector<std::uint64_t> heights;
  std::uint64_t check_shift = 1;  // L
  /// Per stage: time-domain mask (n/f) * 1{t = 0 mod n/f}. Its DFT
  /// diagonalizes the stage circulant C[r][k] = 1{k = r mod f}.
  std::vector<std::vector<double>> masks;
  /// Fourier-plane cosine mask 2 cos(2 pi k / n).
  std::vector<double> cosine;

  static MaskLensPlan build(const CodeEnsemble& crt, std::uint64_t check_shift);
};

/// Physical path is allowed only up to this n (length-n FFTs are formed).
inline constexpr Index kMaxPhysicalN = Index{1} << 22;

/// |F (mask .* x)|.
std::vector<double> mask_lens_measure(std::span<const Complex> x, std::span<const double> mask);

/// Complex F (mask .* x), before detection.
std::vector<Complex> mask_lens_field(std::span<const Complex> x, std::span<const double> mask);

/// (C v)_r = sum_{k = r mod f} v_k for r = 0..n-1 (explicit circulant multiply).
std::vector<Complex> circulant_apply(std::uint64_t f, std::span<const Complex> v);

/// Circular shift: out(t) = x(t + s mod n).
std::vector<Complex> circular_shift(std::span<const Complex> x, std::int64_t s);

/// Full length-n detector output of one variant (permutation already undone
/// for Cosine).
std::vector<double> stage_output(const MaskLensPlan& plan, std::span<const Complex> x,
                                 std::size_t stage, StageVariant variant);

/// Acquires one stage, verifies the n/f-fold replica property (1e-9 relative)
/// and returns the f unique values. Throws std::logic_error on violation.
std::vector<double> acquire_stage(const MaskLensPlan& plan, std::span<const Complex> x,
                                  std::size_t stage, StageVariant variant);

/// MeasurementSet over the CRT bins for spectrum X (Periodic modulation).
/// Uses the physical mask/lens path when n <= kMaxPhysicalN, else the
/// equivalent analytic encoder.
MeasurementSet ff_sparse_acquire(const SparseSignal& spectrum, const CodeEnsemble& crt,
                                 const ModulationParams& params);

/// Always the physical path (throws if n > kMaxPhysicalN).
MeasurementSet ff_sparse_acquire_physical(const SparseSignal& spectrum, const CodeEnsemble& crt,
                                          const ModulationParams& params);

enum class Algorithm { Unicolor, Multicolor };

const char* to_string(Algorithm a);

DecodeResult ff_sparse_decode(const MeasurementSet& meas, const CodeEnsemble& crt,
                              std::size_t K_hint, Algorithm algorithm = Algorithm::Unicolor,
                              const DecodeOptions& options = {});

/// Dense time-domain signal with the given sparse spectrum.
std::vector<Complex> spectrum_to_time(const SparseSignal& spectrum);

struct IdentityCheck {
  std::string name;
  Index n = 0;
  double max_residual = 0.0;
  std::size_t trials = 0;
  bool passed = false;
};

/// Operator identity suites for a CRT stage set: circulant diagonalization,
/// replica property, F^2 permutation, cosine cascade, mask binariness.
std::vector<IdentityCheck> ff_verify(std::span<const std::uint64_t> coprimes, std::size_t trials,
                                     RngSeed seed, double tol = 1e-9);

}  // namespace phasecode
