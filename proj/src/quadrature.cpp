#include "ginikit/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include <fmt/format.h>

#include "ginikit/error.hpp"

namespace ginikit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GaussLegendreRule build_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = n * (z * p1 - p2) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

void check_spec(const QuadratureSpec& q) {
  if (q.panels < 1 || q.nodes_per_panel < 1 || !(q.target_abs_tol > 0.0) ||
      q.max_refinements < 0 || q.grading_levels < 0) {
    throw DomainError("quadrature: panels, nodes and tolerance must be positive");
  }
}

// Splits every panel of `edges` into 2^level equal pieces.
std::vector<double> refine(const std::vector<double>& edges, int level) {
  const int parts = 1 << level;
  std::vector<double> out;
  out.reserve((edges.size() - 1) * parts + 1);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double width = edges[i + 1] - edges[i];
    for (int s = 0; s < parts; ++s) out.push_back(edges[i] + width * s / parts);
  }
  out.push_back(edges.back());
  return out;
}

// [0, h 2^-L, ..., h/2] followed by the uniform edges h, 2h, ..., n h.
std::vector<double> graded_from_zero(double h, int panels, int levels) {
  std::vector<double> edges{0.0};
  for (int l = levels; l >= 1; --l) edges.push_back(std::ldexp(h, -l));
  for (int i = 1; i <= panels; ++i) edges.push_back(h * i);
  return edges;
}

std::vector<double> periodic_base(const QuadratureSpec& q) {
  const double h = kTwoPi / q.panels;
  std::vector<double> left{0.0};
  for (int l = q.grading_levels; l >= 1; --l) left.push_back(std::ldexp(h, -l));
  std::vector<double> edges = left;
  for (int i = 1; i < q.panels; ++i) edges.push_back(h * i);
  for (auto it = left.rbegin(); it != left.rend(); ++it) edges.push_back(kTwoPi - *it);
  if (q.panels == 1) {
    // a single panel is graded from both sides around pi
    edges = left;
    edges.push_back(std::numbers::pi);
    for (auto it = left.rbegin(); it != left.rend(); ++it) edges.push_back(kTwoPi - *it);
    std::vector<double> cleaned;
    for (double e : edges) {
      if (cleaned.empty() || e > cleaned.back()) cleaned.push_back(e);
    }
    edges = cleaned;
  }
  return edges;
}

struct Pass {
  ComplexValue value;
  double magnitude;
  long evaluations;
  int panels;
};

Pass run_pass(const Integrand& f, const std::vector<double>& edges, const GaussLegendreRule& rule,
              Exec exec) {
  const auto partials = kernels::panel_sums(f, edges, rule.nodes, rule.weights, exec);
  double magnitude = 0.0;
  for (const auto& v : partials) magnitude += std::abs(v);
  const int panels = static_cast<int>(edges.size()) - 1;
  return {kernels::ordered_sum(partials), magnitude,
          static_cast<long>(panels) * static_cast<long>(rule.nodes.size()), panels};
}

// Drives panel doubling until successive estimates agree.
template <class MakeEdges>
QuadratureResult refine_until_converged(const Integrand& f, const QuadratureSpec& q,
                                        const GaussLegendreRule& rule, MakeEdges make_edges,
                                        const char* label) {
  QuadratureResult result;
  Pass previous{};
  for (int level = 0; level <= q.max_refinements; ++level) {
    const Pass pass = run_pass(f, make_edges(level), rule, q.exec);
    result.evaluations += pass.evaluations;
    result.panels = pass.panels;
    result.history.push_back(pass.value);
    if (!std::isfinite(pass.value.real()) || !std::isfinite(pass.value.imag())) {
      throw NumericalError(fmt::format("{}: integrand produced a non-finite value", label));
    }
    if (level > 0) {
      const double delta = std::abs(pass.value - previous.value);
      const double noise = 64.0 * std::numeric_limits<double>::epsilon() * pass.magnitude;
      result.value = pass.value;
      result.abs_error = delta;
      if (level >= q.min_refinements && delta <= std::max(q.target_abs_tol, noise)) {
        return result;
      }
    }
    previous = pass;
  }
  throw ConvergenceError(
      fmt::format("{}: no convergence after {} refinements (last change {:.3g}, tolerance {:.3g})",
                  label, q.max_refinements, result.abs_error, q.target_abs_tol),
      result.value.real(), result.abs_error);
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: node count must be positive");
  static std::mutex guard;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(guard);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

QuadratureResult integrate_periodic(const Integrand& f, const QuadratureSpec& q,
                                    ComplexValue limit_at_zero) {
  check_spec(q);
  if (q.endpoint_policy == EndpointPolicy::AnalyticLimit) {
    // One-node midpoint rule on cells centred at 2 pi j / M is the periodic
    // trapezoid rule; the cell centred at 0 takes the supplied limit.
    static const GaussLegendreRule midpoint{{0.0}, {2.0}};
    const Integrand patched = [&](double t) { return t == 0.0 ? limit_at_zero : f(t); };
    const int base = q.panels * q.nodes_per_panel;
    return refine_until_converged(
        patched, q, midpoint,
        [&](int level) {
          const long cells = static_cast<long>(base) << level;
          const double h = kTwoPi / cells;
          std::vector<double> edges(cells + 1);
          for (long j = 0; j <= cells; ++j) edges[j] = (j - 0.5) * h;
          return edges;
        },
        "integrate_periodic");
  }
  const GaussLegendreRule& rule = gauss_legendre(q.nodes_per_panel);
  const std::vector<double> base = periodic_base(q);
  return refine_until_converged(
      f, q, rule, [&](int level) { return refine(base, level); }, "integrate_periodic");
}

QuadratureResult integrate_line(const Integrand& f, const QuadratureSpec& q) {
  check_spec(q);
  const double T = q.truncation_halfwidth;
  if (!(T > 0.0) || !(q.tail_decay_order > 1.0)) {
    throw DomainError("integrate_line: truncation half-width must be > 0 and tail order > 1");
  }
  const Integrand folded = [&](double t) { return f(t) + f(-t); };
  const GaussLegendreRule& rule = gauss_legendre(q.nodes_per_panel);
  const std::vector<double> base = graded_from_zero(T / q.panels, q.panels, q.grading_levels);
  QuadratureResult result = refine_until_converged(
      folded, q, rule, [&](int level) { return refine(base, level); }, "integrate_line");

  // C = sup t^d |f(t) + f(-t)|, sampled on [T/2, T] and geometrically on
  // (T, 64 T] so that a t^d |f| still rising past T is not missed;
  // tail <= C / ((d-1) T^(d-1)).
  constexpr int kSamples = 257;
  constexpr int kInside = 129;
  double c = 0.0;
  for (int s = 0; s < kSamples; ++s) {
    const double t = s < kInside
                         ? 0.5 * T * (1.0 + static_cast<double>(s) / (kInside - 1))
                         : T * std::pow(64.0, static_cast<double>(s - kInside + 1) /
                                                  (kSamples - kInside));
    c = std::max(c, std::pow(t, q.tail_decay_order) * std::abs(folded(t)));
  }
  result.evaluations += kSamples;
  const double d = q.tail_decay_order;
  result.tail_bound = c / ((d - 1.0) * std::pow(T, d - 1.0));
  result.abs_error += result.tail_bound;
  return result;
}

}  // namespace ginikit
