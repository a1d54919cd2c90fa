#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "phasecode/core.hpp"
#include "phasecode/ensemble.hpp"
#include "phasecode/measurement.hpp"

namespace phasecode {

inline constexpr double kDefaultTau = 1e-6;

/// A colored ball as seen by a processor: value in its component's frame.
struct KnownBall {
  Index index = 0;
  Complex value;
};

struct SingletonHit {
  double magnitude = 0.0;
  std::vector<Index> candidates;  // one in Standard mode, up to four in Periodic
};

struct ResolvableHit {
  Index index = 0;
  Complex value;  // in the known balls' frame
};

/// Modulated sums (g1..g4 weighted) of a set of known balls.
std::array<Complex, 4> modulated_sums(std::span<const KnownBall> balls,
                                      const ModulationParams& params);

/// Residual test: |pred_k - y_k| <= tau * scale for k = 1..4.
bool matches(const std::array<double, 4>& pred, const BinMeasurement& y, double scale, double tau);

/// Lone-ball hypothesis. Requires y1 = y2 = y4 within tau and a resynthesized
/// lone ball reproducing all four values.
std::optional<SingletonHit> process_singleton(const BinMeasurement& y,
                                              const ModulationParams& params,
                                              double tau = kDefaultTau);

/// Two-color hypothesis: the bin holds exactly `red` and `blue`. Returns the
/// unit rotation that maps blue's frame into red's frame.
std::optional<Complex> process_mergeable(const BinMeasurement& y, std::span<const KnownBall> red,
                                         std::span<const KnownBall> blue,
                                         const ModulationParams& params,
                                         double tau = kDefaultTau);

/// One-unknown hypothesis: the bin holds `known` plus one more ball. Returns
/// every (l, x) that passes the four-measurement check, deduplicated by l.
std::vector<ResolvableHit> resolvable_candidates(const BinMeasurement& y,
                                                 std::span<const KnownBall> known,
                                                 const ModulationParams& params,
                                                 double tau = kDefaultTau);

/// Unique passing candidate of resolvable_candidates, else none.
std::optional<ResolvableHit> process_resolvable(const BinMeasurement& y,
                                                std::span<const KnownBall> known,
                                                const ModulationParams& params,
                                                double tau = kDefaultTau);

struct DecodeOptions {
  double tau = kDefaultTau;
  /// 0 means K_hint + 2 (or M + 2 without a hint).
  std::size_t max_sweeps = 0;
};

DecodeResult decode_unicolor(const MeasurementSet& meas, const CodeEnsemble& ensemble,
                             std::size_t K_hint, const DecodeOptions& options = {});

DecodeResult decode_multicolor(const MeasurementSet& meas, const CodeEnsemble& ensemble,
                               std::size_t K_hint, const DecodeOptions& options = {});

}  // namespace phasecode
