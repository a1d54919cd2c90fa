#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace phasecode {

/// rho(t) = e^{-lambda (1 - t)}: edge-perspective right degree distribution.
double edge_degree_poly(double t, double lambda);

/// rho_i = lambda^{i-1} e^{-lambda} / (i-1)!, i >= 1.
double edge_degree_coeff(unsigned i, double lambda);

/// p_{j+1} = (1 + e^{-lambda} - e^{-lambda p_j})^{d-1}.
double de_step(double p, double lambda, unsigned d);

/// [p_start, f(p_start), ..., f^steps(p_start)].
std::vector<double> de_trajectory(double p_start, double lambda, unsigned d, std::size_t steps);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  bool feasible = false;
};

/// lambda range where (d-1) lambda e^{-lambda} > 1, i.e. where p = 1 is unstable.
Range instability_range(unsigned d);
/// The same range expressed in c = d / lambda.
Range instability_range_c(unsigned d);

/// Smallest fixed point of de_step in (0, 1), iterated from 0. Returns 1 when
/// lambda is outside the instability range (p = 1 stagnation).
double error_floor(double lambda, unsigned d);

/// Quantities of the singleton/doubleton random graph formed after step 2,
/// per unit K.
struct GiantTerms {
  double lambda = 0.0;
  double q_s = 0.0;  // P(ball sits in a singleton)
  double p1 = 0.0;   // P(D | S)
  double p2 = 0.0;   // P(D | not S)
  double q = 0.0;    // P(S | D)
  double ms = 0.0;   // M_s / K
  double ks = 0.0;   // K_s / K
  double mean_degree = 0.0;  // 2 M_s / K_s  (= K_s p_s)
};

GiantTerms giant_terms(double c, unsigned d);

/// c interval in which 2 M_s / K_s > 1.
Range giant_component_range(unsigned d);

/// Root in (0, 1) of zeta + e^{-R zeta} = 1 with R = 2 M_s / K_s; 0 if R <= 1.
double giant_fraction(double c, unsigned d);

struct DesignRow {
  unsigned d = 0;
  double c_min = 0.0;  // giant-component threshold
  double c_max = 0.0;
  double lambda_min = 0.0;  // instability range
  double lambda_max = 0.0;
  double c = 0.0;       // operating point: binding lower bound rounded up to 0.01
  double p_star = 0.0;  // exact fixed point at c
  double p_star_approx = 0.0;  // e^{-lambda (d-1)}
  double m_per_K = 0.0;  // 4 c
};

DesignRow design_row(unsigned d);
std::vector<DesignRow> design_table(std::span<const unsigned> ds);

struct DensityEvolutionReport {
  unsigned d = 0;
  double c = 0.0;
  double lambda = 0.0;
  std::vector<double> trajectory;
  double error_floor = 1.0;
  Range giant_range_c;
  Range instability_range_lambda;
};

DensityEvolutionReport density_evolution(double c, unsigned d, double p_start, std::size_t steps);

}  // namespace phasecode
