#include "phasecode/nonsparse.hpp"

#include <algorithm>
#include <cmath>

#include "phasecode/fft.hpp"

namespace phasecode {

double nonsparse_threshold(std::span<const double> mags) {
  if (mags.empty()) return 0.0;
  double s = 0.0;
  for (double m : mags) s += m * m;
  return 1e-9 * std::sqrt(s / static_cast<double>(mags.size()));
}

ChainMeasurements chain_measure(std::span<const Complex> x, double omega, std::size_t anchor) {
  const std::size_t n = x.size();
  if (n < 2) throw ParameterError("chain_measure: n must be at least 2");
  if (anchor < 1 || anchor > n) throw ParameterError("chain_measure: anchor out of range");
  ChainMeasurements m;
  m.omega = omega > 0.0 ? omega : kPi / (2.0 * static_cast<double>(n));
  m.anchor = anchor;
  const Complex xa = x[anchor - 1];
  m.mags.reserve(n);
  for (const auto& v : x) m.mags.push_back(std::abs(v));
  std::size_t t = 0;
  for (std::size_t l = 1; l <= n; ++l) {
    if (l == anchor) continue;
    ++t;
    m.sums.push_back(std::abs(xa + x[l - 1]));
    m.rotated_sums.push_back(std::abs(xa + std::polar(1.0, m.omega * t) * x[l - 1]));
  }
  return m;
}

std::vector<Complex> chain_decode(const ChainMeasurements& meas) {
  const std::size_t n = meas.mags.size();
  if (n < 2 || meas.sums.size() != n - 1 || meas.rotated_sums.size() != n - 1)
    throw ParameterError("chain_decode: inconsistent measurement sizes");
  const double tau = nonsparse_threshold(meas.mags);
  const double a = meas.mags[meas.anchor - 1];
  if (!(a > tau)) throw AnchorError("chain_decode: anchor magnitude below threshold");
  std::vector<Complex> x(n);
  x[meas.anchor - 1] = Complex(a, 0.0);
  std::size_t t = 0;
  for (std::size_t l = 1; l <= n; ++l) {
    if (l == meas.anchor) continue;
    ++t;
    const double m = meas.mags[l - 1];
    if (m <= tau) continue;
    const double s = meas.sums[t - 1];
    const double r = meas.rotated_sums[t - 1];
    // |a + m e^{i phi}|^2 = a^2 + m^2 + 2 a m cos(phi), likewise with phi + theta.
    const double re = (s * s - a * a - m * m) / (2.0 * a);           // m cos(phi)
    const double re_rot = (r * r - a * a - m * m) / (2.0 * a);       // m cos(phi + theta)
    const double theta = meas.omega * static_cast<double>(t);
    const double im_lin = (re * std::cos(theta) - re_rot) / std::sin(theta);
    const double im_mag = std::sqrt(std::max(m * m - re * re, 0.0));
    // The magnitude form is better conditioned unless phi is near 0 or pi.
    const double im = im_mag > 1e-3 * m ? std::copysign(im_mag, im_lin) : im_lin;
    x[l - 1] = Complex(re, im);
  }
  return x;
}

FfNonsparseMeasurements ff_nonsparse_measure(std::span<const Complex> x) {
  const std::size_t n = x.size();
  if (n < 2) throw ParameterError("ff_nonsparse_measure: n must be at least 2");
  FfNonsparseMeasurements m;
  std::vector<Complex> v(x.begin(), x.end());
  const auto lens = [&](const std::vector<Complex>& in, std::vector<double>& out) {
    const auto X = dft(in);
    out.resize(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = std::abs(X[k]);
  };
  lens(v, m.plain);
  v[0] = 2.0 * x[0];
  lens(v, m.doubled);
  v[0] = Complex(1.0, 1.0) * x[0];
  lens(v, m.quadrature);
  return m;
}

std::vector<double> solve_anchor_magnitude(double y1, double y2, double y3) {
  if (!(y1 > 0.0)) throw ParameterError("solve_anchor_magnitude: y1 must be positive");
  const double A = y2 * y2 - y1 * y1;
  const double B = y3 * y3 - y1 * y1;
  // 2 t^2 - (2A + 2B + 4 y1^2) t + (A^2 + B^2) = 0
  const double qa = 2.0;
  const double qb = -(2.0 * A + 2.0 * B + 4.0 * y1 * y1);
  const double qc = A * A + B * B;
  const double disc = qb * qb - 4.0 * qa * qc;
  const double scale = qb * qb + std::abs(4.0 * qa * qc);
  if (disc < -1e-12 * scale) throw ParameterError("solve_anchor_magnitude: no real root");
  const double sq = std::sqrt(std::max(disc, 0.0));
  const double q = -0.5 * (qb + std::copysign(sq, qb));
  std::vector<double> roots;
  if (q != 0.0) {
    roots.push_back(q / qa);
    roots.push_back(qc / q);
  } else {
    roots.push_back(0.0);
  }
  std::vector<double> out;
  for (double t : roots)
    if (t >= 0.0) out.push_back(t);
  if (out.empty()) throw ParameterError("solve_anchor_magnitude: no nonnegative root");
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Complex> ff_nonsparse_decode(const FfNonsparseMeasurements& meas) {
  const std::size_t n = meas.plain.size();
  if (n < 2 || meas.doubled.size() != n || meas.quadrature.size() != n)
    throw ParameterError("ff_nonsparse_decode: inconsistent measurement sizes");
  const double tau = nonsparse_threshold(meas.plain);
  std::vector<std::size_t> bad;
  for (std::size_t k = 0; k < n; ++k)
    if (!(meas.plain[k] > tau)) bad.push_back(k);
  if (!bad.empty())
    throw UnresolvableBinsError("ff_nonsparse_decode: vanishing frequency bins", bad);

  // Vote for |x_1|^2 across bins.
  struct Root {
    double t;
    std::size_t bin;
  };
  std::vector<Root> roots;
  for (std::size_t k = 0; k < n; ++k) {
    try {
      for (double t : solve_anchor_magnitude(meas.plain[k], meas.doubled[k], meas.quadrature[k]))
        roots.push_back({t, k});
    } catch (const ParameterError&) {
      // inconsistent bin: no vote
    }
  }
  if (roots.empty()) throw AnchorError("ff_nonsparse_decode: no anchor candidate");
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.t < b.t; });
  constexpr double kVoteTol = 1e-8;
  std::size_t best_lo = 0;
  std::size_t best_count = 0;
  std::size_t hi = 0;
  for (std::size_t lo = 0; lo < roots.size(); ++lo) {
    if (hi < lo) hi = lo;
    while (hi + 1 < roots.size() &&
           roots[hi + 1].t - roots[lo].t <= kVoteTol * std::max(roots[lo].t, 1e-300))
      ++hi;
    const std::size_t count = hi - lo + 1;
    if (count > best_count) {
      best_count = count;
      best_lo = lo;
    }
  }
  std::vector<double> window;
  for (std::size_t i = best_lo; i < best_lo + best_count; ++i) window.push_back(roots[i].t);
  const double t = window[window.size() / 2];
  const double s = std::sqrt(t);
  if (!(s > tau / std::sqrt(static_cast<double>(n))))
    throw AnchorError("ff_nonsparse_decode: anchor magnitude below threshold");

  std::vector<Complex> X(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double y1 = meas.plain[k];
    const double A = meas.doubled[k] * meas.doubled[k] - y1 * y1;
    const double B = meas.quadrature[k] * meas.quadrature[k] - y1 * y1;
    X[k] = Complex((A - t) / (2.0 * s), (B - t) / (2.0 * s));
  }
  return idft(X);
}

}  // namespace phasecode
