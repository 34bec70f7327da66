#pragma once

#include <vector>

#include "ginikit/distributions.hpp"
#include "ginikit/kernels.hpp"

namespace ginikit {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule; the reference stays valid for the life of the program.
const GaussLegendreRule& gauss_legendre(int n);

enum class EndpointPolicy {
  /// Composite Gauss-Legendre; nodes never touch the removable singularity.
  AvoidEndpoints,
  /// Periodic trapezoid rule that includes theta = 0, where the caller
  /// supplies the analytic limit of the integrand.
  AnalyticLimit,
};

struct QuadratureSpec {
  int panels = 16;
  int nodes_per_panel = 16;
  EndpointPolicy endpoint_policy = EndpointPolicy::AvoidEndpoints;
  /// Half-width T of the truncated line integral [-T, T].
  double truncation_halfwidth = 1e3;
  double target_abs_tol = 1e-10;
  /// Each refinement doubles the panel count.
  int max_refinements = 14;
  int min_refinements = 2;
  /// Geometric subdivisions of the panels next to the singular endpoints.
  int grading_levels = 30;
  /// Line integrals: assumed power-law decay |f(t) + f(-t)| <= C / t^d used
  /// for the tail bound beyond T. Must exceed 1.
  double tail_decay_order = 2.0;
  Exec exec = Exec::Parallel;
};

struct QuadratureResult {
  ComplexValue value;
  /// Difference between the last two refinements plus any tail bound.
  double abs_error = 0.0;
  /// Line integrals: bound on the neglected |t| > T part (included above).
  double tail_bound = 0.0;
  int panels = 0;
  long evaluations = 0;
  /// Estimate after each refinement, coarsest first.
  std::vector<ComplexValue> history;
};

/// Integral of f over [0, 2 pi]. With AnalyticLimit, `limit_at_zero` is used
/// in place of f(0) = f(2 pi).
QuadratureResult integrate_periodic(const Integrand& f, const QuadratureSpec& q,
                                    ComplexValue limit_at_zero = 0.0);

/// Integral of f over [-T, T] (evaluated as the integral of f(t) + f(-t) over
/// [0, T]) with a tail bound beyond T added to the error.
QuadratureResult integrate_line(const Integrand& f, const QuadratureSpec& q);

}  // namespace ginikit
