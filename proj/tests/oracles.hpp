#pragma once

// Brute-force reference implementations shared by the unit and acceptance
// tests. They search exhaustively instead of solving in closed form.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "phasecode/core.hpp"
#include "phasecode/decoder.hpp"
#include "phasecode/measurement.hpp"

namespace oracle {

using phasecode::BinMeasurement;
using phasecode::Complex;
using phasecode::Index;
using phasecode::KnownBall;
using phasecode::ModulationParams;

inline double max4(const BinMeasurement& y) { return std::max({y[0], y[1], y[2], y[3]}); }

inline double total_magnitude(std::span<const KnownBall> balls) {
  double s = 0.0;
  for (const auto& b : balls) s += std::abs(b.value);
  return s;
}

inline double residual(const std::array<Complex, 4>& sums, const BinMeasurement& y) {
  double r = 0.0;
  for (int k = 0; k < 4; ++k) r = std::max(r, std::abs(std::abs(sums[k]) - y[k]));
  return r;
}

inline BinMeasurement measure(std::span<const KnownBall> balls, const ModulationParams& p) {
  const auto s = phasecode::modulated_sums(balls, p);
  return {std::abs(s[0]), std::abs(s[1]), std::abs(s[2]), std::abs(s[3])};
}

struct Located {
  Index index = 0;
  double residual = 0.0;
};

/// Lone ball of magnitude y1 at every l in [1, n]; the best l and its residual.
inline Located singleton(const BinMeasurement& y, const ModulationParams& p) {
  Located best{0, 1e300};
  for (Index l = 1; l <= p.n; ++l) {
    const auto g = phasecode::modulation_coeffs(p, l);
    std::array<Complex, 4> s;
    for (int k = 0; k < 4; ++k) s[k] = g[k] * y[0];
    const double r = residual(s, y);
    if (r < best.residual) best = {l, r};
  }
  return best;
}

struct Rotated {
  double psi = 0.0;
  double residual = 0.0;
};

/// Minimizes the residual of red + e^{i psi} blue over psi: dense grid then
/// golden-section refinement around the best few cells.
inline Rotated mergeable(const BinMeasurement& y, std::span<const KnownBall> red,
                         std::span<const KnownBall> blue, const ModulationParams& p) {
  const auto sr = phasecode::modulated_sums(red, p);
  const auto sb = phasecode::modulated_sums(blue, p);
  const auto f = [&](double psi) {
    const Complex rot = std::polar(1.0, psi);
    std::array<Complex, 4> s;
    for (int k = 0; k < 4; ++k) s[k] = sr[k] + rot * sb[k];
    return residual(s, y);
  };
  constexpr int kGrid = 4096;
  const double h = 2.0 * phasecode::kPi / kGrid;
  std::vector<std::pair<double, int>> cells;
  for (int i = 0; i < kGrid; ++i) cells.push_back({f(i * h), i});
  std::partial_sort(cells.begin(), cells.begin() + 8, cells.end());
  Rotated best{0.0, 1e300};
  for (int c = 0; c < 8; ++c) {
    double lo = (cells[c].second - 1) * h, hi = (cells[c].second + 1) * h;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 200; ++it) {
      const double m1 = hi - gr * (hi - lo), m2 = lo + gr * (hi - lo);
      if (f(m1) < f(m2)) hi = m2;
      else lo = m1;
    }
    const double psi = 0.5 * (lo + hi);
    const double r = f(psi);
    if (r < best.residual) best = {psi, r};
  }
  return best;
}

struct Resolved {
  Index index = 0;
  Complex value;
  double residual = 1e300;
  std::size_t passing = 0;  // number of l whose best residual is within the threshold
};

/// For every l, intersects the circles |a + g1 x| = y1 and |b + g2 x| = y2
/// in the x plane and scores each intersection on all four measurements.
inline Resolved resolvable(const BinMeasurement& y, std::span<const KnownBall> known,
                           const ModulationParams& p, double threshold) {
  const auto s = phasecode::modulated_sums(known, p);
  Resolved best;
  for (Index l = 1; l <= p.n; ++l) {
    const auto g = phasecode::modulation_coeffs(p, l);
    // x in circle centred -a/g1 radius y1, and -b/g2 radius y2 (|g| = 1).
    const Complex c1 = -s[0] / g[0], c2 = -s[1] / g[1];
    const double r1 = y[0], r2 = y[1];
    const double dist = std::abs(c2 - c1);
    if (dist < 1e-300) continue;
    const double along = (dist * dist + r1 * r1 - r2 * r2) / (2.0 * dist);
    const double h2 = r1 * r1 - along * along;
    const double hh = std::sqrt(std::max(h2, 0.0));
    const Complex e = (c2 - c1) / dist;
    double l_best = 1e300;
    Complex x_best;
    for (double sgn : {1.0, -1.0}) {
      const Complex x = c1 + e * along + sgn * Complex(0, 1) * e * hh;
      std::array<Complex, 4> t;
      for (int k = 0; k < 4; ++k) t[k] = s[k] + g[k] * x;
      const double r = residual(t, y);
      if (r < l_best) {
        l_best = r;
        x_best = x;
      }
    }
    if (l_best <= threshold) ++best.passing;
    if (l_best < best.residual) {
      best.index = l;
      best.value = x_best;
      best.residual = l_best;
    }
  }
  return best;
}

/// Random ball value with magnitude in [0.2, 2].
inline Complex random_value(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.2, 2.0), ph(0.0, 2.0 * phasecode::kPi);
  return std::polar(mag(rng), ph(rng));
}

inline std::vector<KnownBall> random_balls(std::size_t count, Index n, std::mt19937_64& rng,
                                           std::vector<Index>& used) {
  std::uniform_int_distribution<Index> pick(1, n);
  std::vector<KnownBall> out;
  while (out.size() < count) {
    const Index l = pick(rng);
    if (std::find(used.begin(), used.end(), l) != used.end()) continue;
    used.push_back(l);
    out.push_back({l, random_value(rng)});
  }
  return out;
}

}  // namespace oracle
