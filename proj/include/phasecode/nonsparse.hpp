#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "phasecode/core.hpp"

namespace phasecode {

/// The anchor component is (numerically) zero, so relative phases are lost.
class AnchorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Some frequency bins vanish; `bins` lists them (0-based).
class UnresolvableBinsError : public std::runtime_error {
 public:
  UnresolvableBinsError(const std::string& what, std::vector<std::size_t> bins)
      : std::runtime_error(what), bins(std::move(bins)) {}
  std::vector<std::size_t> bins;
};

/// 3n - 2 measurements: |x_l| for all l, then for every l != anchor (in
/// increasing order, position t = 1..n-1) |x_a + x_l| and |x_a + e^{i w t} x_l|.
struct ChainMeasurements {
  std::vector<double> mags;
  std::vector<double> sums;
  std::vector<double> rotated_sums;
  double omega = 0.0;
  std::size_t anchor = 1;  // 1-based

  std::size_t count() const { return mags.size() + sums.size() + rotated_sums.size(); }
};

/// omega <= 0 selects pi / (2n).
ChainMeasurements chain_measure(std::span<const Complex> x, double omega = 0.0,
                                std::size_t anchor = 1);

/// Recovers x up to a global phase with x_anchor real positive.
std::vector<Complex> chain_decode(const ChainMeasurements& meas);

/// |F M1 x|, |F M2 x|, |F M3 x| with M1 = I, M2 = diag(2,1,..), M3 = diag(1+i,1,..).
struct FfNonsparseMeasurements {
  std::vector<double> plain;
  std::vector<double> doubled;
  std::vector<double> quadrature;

  std::size_t count() const { return plain.size() + doubled.size() + quadrature.size(); }
};

FfNonsparseMeasurements ff_nonsparse_measure(std::span<const Complex> x);

/// Nonnegative roots t = |x_1|^2 of (y2^2 - y1^2 - t)^2 + (y3^2 - y1^2 - t)^2 = 4 y1^2 t.
std::vector<double> solve_anchor_magnitude(double y1, double y2, double y3);

std::vector<Complex> ff_nonsparse_decode(const FfNonsparseMeasurements& meas);

/// Zero-threshold used by both decoders: 1e-9 times the RMS magnitude.
double nonsparse_threshold(std::span<const double> mags);

}  // namespace phasecode
