#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "phasecode/core.hpp"
#include "phasecode/ensemble.hpp"

namespace phasecode {

/// Standard: omega = pi/(2n), phase omega*l.
/// Periodic: omega = 2pi/n with phase omega*(l-1); the Fourier-friendly mode,
/// where l-1 is a DFT frequency index and modulations come from integer shifts.
enum class ModulationMode { Standard, Periodic };

struct ModulationParams {
  Index n = 0;
  std::uint64_t L = 1;  // check row frequency omega' = 2 pi L / n
  ModulationMode mode = ModulationMode::Standard;

  /// Draws L uniformly in {1..n-1} (L = 0 is redrawn). Requires n >= 2.
  static ModulationParams draw(Index n, RngSeed seed, ModulationMode mode = ModulationMode::Standard);

  double omega() const;
  double omega_prime() const;
  /// omega*l (Standard) or omega*(l-1) (Periodic).
  double phase(Index l) const;
  /// omega'*l reduced mod 2 pi exactly in integer arithmetic.
  double check_phase(Index l) const;

  /// Candidate indices l whose |cos(phase(l))| is `abs_cos`. One candidate in
  /// Standard mode, up to four in Periodic mode. Out-of-range values are dropped.
  void location_candidates(double abs_cos, std::vector<Index>& out) const;
};

using Coeffs = std::array<Complex, 4>;

/// (e^{i w l}, e^{-i w l}, 2 cos(w l), e^{i w' l}).
Coeffs modulation_coeffs(const ModulationParams& params, Index l);

using BinMeasurement = std::array<double, 4>;

struct MeasurementSet {
  std::vector<BinMeasurement> bins;  // bins[i - 1] for 1-based bin i
  ModulationParams params;

  std::size_t num_bins() const { return bins.size(); }
  std::size_t scalar_count() const { return 4 * bins.size(); }
};

/// y_{i,k} = |sum_{l in bin i} g_k(l) x_l|, O(Kd) time, O(M) memory.
MeasurementSet encode(const SparseSignal& signal, const CodeEnsemble& ensemble,
                      const ModulationParams& params);

/// Per-bin complex sums before taking magnitudes; the same loop as encode.
std::vector<std::array<Complex, 4>> encode_complex(const SparseSignal& signal,
                                                    const CodeEnsemble& ensemble,
                                                    const ModulationParams& params);

using DenseMatrix = std::vector<std::vector<Complex>>;

/// Rows i*|G| + j equal G(j, :) .* H(i, :).
DenseMatrix row_tensor_product(const DenseMatrix& G, const DenseMatrix& H);

/// 4 x n matrix of modulation coefficients (small n only).
DenseMatrix modulation_matrix(const ModulationParams& params);

std::vector<double> abs_matvec(const DenseMatrix& A, std::span<const Complex> x);

// Measurement file: header "M n L", then M lines "y1 y2 y3 y4".
void write_measurements(const std::string& path, const MeasurementSet& meas);
MeasurementSet read_measurements(const std::string& path);

}  // namespace phasecode
