#include "phasecode/analysis.hpp"

#include <cmath>
#include <functional>

#include "phasecode/core.hpp"

namespace phasecode {

double edge_degree_poly(double t, double lambda) { return std::exp(-lambda * (1.0 - t)); }

double edge_degree_coeff(unsigned i, double lambda) {
  if (i < 1) throw ParameterError("edge_degree_coeff: i must be >= 1");
  return std::exp((i - 1) * std::log(lambda) - lambda - std::lgamma(static_cast<double>(i)));
}

double de_step(double p, double lambda, unsigned d) {
  const double base = 1.0 + std::exp(-lambda) - std::exp(-lambda * p);
  return std::pow(base, static_cast<double>(d - 1));
}

std::vector<double> de_trajectory(double p_start, double lambda, unsigned d, std::size_t steps) {
  std::vector<double> out{p_start};
  out.reserve(steps + 1);
  for (std::size_t j = 0; j < steps; ++j) out.push_back(de_step(out.back(), lambda, d));
  return out;
}

namespace {

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Range instability_range(unsigned d) {
  if (d < 2) return {};
  const auto g = [d](double l) { return (d - 1.0) * l * std::exp(-l) - 1.0; };
  // Peak at lambda = 1.
  if (!(g(1.0) > 0.0)) return {};
  double hi = 2.0;
  while (g(hi) > 0.0) hi *= 2.0;
  return {bisect(g, 1e-12, 1.0, 1e-13), bisect(g, 1.0, hi, 1e-13), true};
}

Range instability_range_c(unsigned d) {
  const Range r = instability_range(d);
  if (!r.feasible) return {};
  return {d / r.hi, d / r.lo, true};
}

double error_floor(double lambda, unsigned d) {
  const Range r = instability_range(d);
  if (!r.feasible || !(lambda > r.lo && lambda < r.hi)) return 1.0;
  double p = 0.0;
  for (int it = 0; it < 10000000; ++it) {
    const double next = de_step(p, lambda, d);
    if (std::abs(next - p) < 1e-15) return next;
    p = next;
  }
  return p;
}

GiantTerms giant_terms(double c, unsigned d) {
  GiantTerms t;
  t.lambda = d / c;
  const double r1 = edge_degree_coeff(1, t.lambda);
  const double r2 = edge_degree_coeff(2, t.lambda);
  const double dd = static_cast<double>(d);
  const double not_s = std::pow(1.0 - r1, dd);
  const double not_s_not_d = std::pow(1.0 - r1 - r2, dd);
  t.q_s = 1.0 - not_s;
  t.p1 = (1.0 - not_s - std::pow(1.0 - r2, dd) + not_s_not_d) / t.q_s;
  t.p2 = 1.0 - not_s_not_d / not_s;
  t.q = t.p1 * t.q_s / (t.p1 * t.q_s + t.p2 * (1.0 - t.q_s));
  t.ms = c * t.lambda * t.lambda * std::exp(-t.lambda) / 2.0 * t.q * t.q;
  t.ks = t.q_s;
  t.mean_degree = 2.0 * t.ms / t.ks;
  return t;
}

Range giant_component_range(unsigned d) {
  const auto f = [d](double c) { return giant_terms(c, d).mean_degree - 1.0; };
  // Log grid scan for the bracketing sign changes.
  const double c0 = 0.25;
  const double c1 = 4096.0;
  const int steps = 4000;
  double prev_c = c0;
  double prev_f = f(c0);
  Range r;
  bool have_lo = false;
  for (int i = 1; i <= steps; ++i) {
    const double c = c0 * std::pow(c1 / c0, static_cast<double>(i) / steps);
    const double fc = f(c);
    if (prev_f <= 0.0 && fc > 0.0 && !have_lo) {
      r.lo = bisect(f, prev_c, c, 1e-12);
      have_lo = true;
    } else if (have_lo && prev_f > 0.0 && fc <= 0.0) {
      r.hi = bisect(f, prev_c, c, 1e-12);
      r.feasible = true;
      return r;
    }
    prev_c = c;
    prev_f = fc;
  }
  return r;
}

double giant_fraction(double c, unsigned d) {
  const double R = giant_terms(c, d).mean_degree;
  if (!(R > 1.0)) return 0.0;
  const auto g = [R](double z) { return z + std::exp(-R * z) - 1.0; };
  // g < 0 just above 0 when R > 1, g(1) = e^{-R} > 0.
  return bisect(g, 1e-12, 1.0, 1e-14);
}

DesignRow design_row(unsigned d) {
  if (d < 3) throw ParameterError("design_row: d must be >= 3");
  DesignRow row;
  row.d = d;
  const Range g = giant_component_range(d);
  const Range l = instability_range(d);
  row.c_min = g.lo;
  row.c_max = g.hi;
  row.lambda_min = l.lo;
  row.lambda_max = l.hi;
  const double bound = std::max(g.feasible ? g.lo : 0.0, l.feasible ? d / l.hi : 0.0);
  row.c = std::ceil(bound * 100.0 - 1e-9) / 100.0;
  const double lambda = d / row.c;
  row.p_star = error_floor(lambda, d);
  row.p_star_approx = std::exp(-lambda * (d - 1.0));
  row.m_per_K = 4.0 * row.c;
  return row;
}

std::vector<DesignRow> design_table(std::span<const unsigned> ds) {
  std::vector<DesignRow> rows;
  for (unsigned d : ds) rows.push_back(design_row(d));
  return rows;
}

DensityEvolutionReport density_evolution(double c, unsigned d, double p_start, std::size_t steps) {
  DensityEvolutionReport r;
  r.d = d;
  r.c = c;
  r.lambda = d / c;
  r.trajectory = de_trajectory(p_start, r.lambda, d, steps);
  r.error_floor = error_floor(r.lambda, d);
  r.giant_range_c = giant_component_range(d);
  r.instability_range_lambda = instability_range(d);
  return r;
}

}  // namespace phasecode
