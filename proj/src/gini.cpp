#include "ginikit/gini.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <variant>

#include <fmt/format.h>

#include "ginikit/asymptotics.hpp"
#include "ginikit/error.hpp"
#include "ginikit/sampling.hpp"

namespace ginikit {

namespace {

constexpr double kPi = std::numbers::pi;
// 4(1-p)/p^2 = 1 at p = 2(sqrt 2 - 1); rounding alone must not admit it.
const double kSeriesBoundary = 2.0 * (std::sqrt(2.0) - 1.0);

struct MethodName {
  GiniMethod method;
  std::string_view name;
};

constexpr std::array<MethodName, 12> kMethodNames{{
    {GiniMethod::ClosedForm, "closed-form"},
    {GiniMethod::ExcessSum, "excess-sum"},
    {GiniMethod::FourierDiscrete, "fourier"},
    {GiniMethod::FourierDiscreteAlt, "fourier-alt"},
    {GiniMethod::FourierContinuous, "fourier-continuous"},
    {GiniMethod::NBFourier, "nb-fourier"},
    {GiniMethod::NBSeries, "nb-series"},
    {GiniMethod::ClassicPairwise, "pairwise"},
    {GiniMethod::MonteCarlo, "monte-carlo"},
    {GiniMethod::AsymptoticSmallK, "small-k"},
    {GiniMethod::AsymptoticLargeK, "large-k"},
    {GiniMethod::Empirical, "empirical"},
}};

ComplexValue complex_expm1(ComplexValue z) {
  const double s = std::sin(0.5 * z.imag());
  return {std::expm1(z.real()) * std::cos(z.imag()) - 2.0 * s * s,
          std::exp(z.real()) * std::sin(z.imag())};
}

ComplexValue complex_log1p(ComplexValue z) {
  const double re = z.real();
  const double im = z.imag();
  return {0.5 * std::log1p(2.0 * re + re * re + im * im), std::atan2(im, 1.0 + re)};
}

// Accepts a result whose value is in [0,1] up to its error estimate.
GiniResult finalize(GiniResult r) {
  if (!std::isfinite(r.value)) {
    throw NumericalError(fmt::format("{}: non-finite value", method_name(r.method)));
  }
  if (r.value >= 0.0 && r.value <= 1.0) return r;
  const double excursion = r.value < 0.0 ? -r.value : r.value - 1.0;
  if (excursion <= r.abs_error_estimate) {
    r.value = std::clamp(r.value, 0.0, 1.0);
    r.clamped = true;
    return r;
  }
  throw NumericalError(fmt::format("{}: value {} lies outside [0,1] beyond its error estimate {}",
                                   method_name(r.method), r.value, r.abs_error_estimate));
}

void require_discrete(const DistributionSpec& spec, const char* op) {
  if (!spec.is_discrete()) {
    throw UnsupportedError(fmt::format("{}: {} is continuous", op, spec.describe()));
  }
}

struct Truncation {
  std::int64_t J;
  double tail;          // bound on P(X > J)
  double first_moment;  // bound on E[X ; X > J]
  double markov;        // mean/(J+1)
};

// Smallest J >= mean (on a coarse geometric grid) where the neglected
// probability and first moment are below tol and pmf(J) < tol.
Truncation find_truncation(const DistributionSpec& spec, double tol, std::int64_t cap,
                           const char* op) {
  if (!(tol > 0.0)) throw DomainError(fmt::format("{}: tolerance must be positive", op));
  const double m = mean(spec);
  auto J = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(m)));
  while (true) {
    const double tail = tail_ratio_bound(spec, J);
    const double first = tail_first_moment_bound(spec, J);
    if (tail + first / m < tol && pmf(spec, J) < tol) {
      return {J, tail, first, m / (static_cast<double>(J) + 1.0)};
    }
    J = J < 64 ? J + 1 : J + J / 16;
    if (J > cap) {
      throw ConvergenceError(
          fmt::format("{}: truncation bound {} not reached within {} terms for {}", op, tol, cap,
                      spec.describe()),
          std::numeric_limits<double>::quiet_NaN(), tail + first / m);
    }
  }
}

std::vector<double> pmf_table(const DistributionSpec& spec, std::int64_t J) {
  std::vector<double> table(J + 1);
  for (std::int64_t j = 0; j <= J; ++j) table[j] = pmf(spec, j);
  return table;
}

GiniResult fourier_result(const QuadratureResult& qr, double scale, double offset,
                          GiniMethod method) {
  GiniResult r;
  r.method = method;
  r.value = offset + scale * qr.value.real();
  r.imag_residual = std::abs(scale * qr.value.imag());
  r.abs_error_estimate = scale * qr.abs_error;
  r.terms = qr.evaluations;
  if (*r.imag_residual >= kImagResidualLimit) {
    throw NumericalError(fmt::format("{}: imaginary residual {:.3g} exceeds {:.1g}",
                                     method_name(method), *r.imag_residual, kImagResidualLimit));
  }
  return finalize(r);
}

}  // namespace

std::string_view method_name(GiniMethod method) {
  for (const auto& entry : kMethodNames) {
    if (entry.method == method) return entry.name;
  }
  return "unknown";
}

std::optional<GiniMethod> parse_method(std::string_view name) {
  for (const auto& entry : kMethodNames) {
    if (entry.name == name) return entry.method;
  }
  return std::nullopt;
}

std::vector<GiniMethod> all_methods() {
  std::vector<GiniMethod> out;
  for (const auto& entry : kMethodNames) out.push_back(entry.method);
  return out;
}

ComplexValue log_char_fn_discrete(const DistributionSpec& spec, double theta) {
  require_discrete(spec, "log_char_fn_discrete");
  // Periodic in theta; the reduced angle keeps the shift term i theta small.
  theta = std::remainder(theta, 2.0 * kPi);
  const double s = std::sin(0.5 * theta);
  const ComplexValue e_minus_one(-2.0 * s * s, std::sin(theta));  // e^{i theta} - 1
  if (const auto* d = std::get_if<Poisson>(&spec.params())) return d->lambda * e_minus_one;
  double k = 1.0;
  double p = 0.0;
  double shift = 0.0;
  if (const auto* d = std::get_if<Geometric>(&spec.params())) {
    p = d->p;
    shift = d->support_start;
  } else {
    const auto& nb = std::get<NegativeBinomial>(spec.params());
    k = nb.k;
    p = nb.p;
  }
  // 1 - q e^{i theta} = p (1 + (q/p)(1 - e^{i theta}))
  const ComplexValue z = -((1.0 - p) / p) * e_minus_one;
  return -k * complex_log1p(z) + ComplexValue(0.0, shift * theta);
}

GiniResult gini_closed_form(const DistributionSpec& spec) {
  GiniResult r;
  r.method = GiniMethod::ClosedForm;
  if (std::holds_alternative<Exponential>(spec.params())) {
    r.value = 0.5;
  } else if (const auto* g = std::get_if<Geometric>(&spec.params())) {
    r.value = g->support_start == 0 ? 1.0 / (2.0 - g->p) : (1.0 - g->p) / (2.0 - g->p);
  } else if (const auto* pa = std::get_if<Pareto>(&spec.params())) {
    r.value = 1.0 / (2.0 * pa->alpha - 1.0);
  } else if (const auto* u = std::get_if<UniformContinuous>(&spec.params())) {
    r.value = (u->b - u->a) / (3.0 * (u->a + u->b));
  } else {
    throw UnsupportedError("closed-form: no closed form known for " + spec.describe());
  }
  return r;
}

GiniResult gini_excess_sum(const DistributionSpec& spec, double tol) {
  require_discrete(spec, "excess-sum");
  const Truncation t = find_truncation(spec, tol, 50'000'000, "excess-sum");
  const double m = mean(spec);
  const std::vector<double> p = pmf_table(spec, t.J);
  // above[j] = P(X > j) and excess[j] = sum_{i >= j} P(X > i), both from the table
  std::vector<double> terms(p.size());
  double above = 0.0;
  double excess = 0.0;
  for (std::int64_t j = t.J; j >= 0; --j) {
    excess += above;
    terms[j] = p[j] * excess;
    above += p[j];
  }
  GiniResult r;
  r.method = GiniMethod::ExcessSum;
  r.value = kernels::ordered_sum(terms) / m;
  r.truncation_tail_bound = t.tail + t.first_moment / m;
  r.markov_tail_bound = t.markov;
  r.abs_error_estimate = *r.truncation_tail_bound;
  r.terms = t.J;
  return finalize(r);
}

GiniResult gini_fourier_discrete(const DistributionSpec& spec, const QuadratureSpec& q,
                                 FourierVariant variant) {
  require_discrete(spec, "fourier");
  const double m = mean(spec);
  const Integrand f = [&spec, m, variant](double t) -> ComplexValue {
    // Every factor is built from the same reduced angle so the cancellations
    // near t = 2 pi match those near 0.
    t = std::remainder(t, 2.0 * kPi);
    const double s = std::sin(0.5 * t);
    const double s2 = s * s;
    const ComplexValue log_minus = log_char_fn_discrete(spec, -t);
    const ComplexValue p_minus_m1 = complex_expm1(log_minus);  // p(-t) - 1
    const ComplexValue e_minus(-2.0 * s2, -std::sin(t));      // e^{-it} - 1
    ComplexValue numerator;
    if (variant == FourierVariant::SquaredMagnitude) {
      const double mag_m1 = std::expm1(2.0 * log_minus.real());  // |p|^2 - 1
      numerator = p_minus_m1 - mag_m1 - m * e_minus * (1.0 + p_minus_m1);
    } else {
      const ComplexValue p_plus_m1 = complex_expm1(std::conj(log_minus));  // p(t) - 1
      numerator = (-p_plus_m1 - m * e_minus) * (1.0 + p_minus_m1);
    }
    // 1/(4 pi m) * numerator / (1 - cos t)
    return numerator / (8.0 * kPi * m * s2);
  };
  const double limit = (second_moment(spec) + m) / (4.0 * kPi * m);
  const QuadratureResult qr = integrate_periodic(f, q, limit);
  return fourier_result(qr, 1.0, 0.0,
                        variant == FourierVariant::SquaredMagnitude ? GiniMethod::FourierDiscrete
                                                                    : GiniMethod::FourierDiscreteAlt);
}

GiniResult gini_fourier_continuous(const DistributionSpec& spec, const QuadratureSpec& q) {
  if (spec.is_discrete()) {
    throw UnsupportedError("fourier-continuous: " + spec.describe() + " is discrete");
  }
  const double m = mean(spec);
  // p(t) g(t) minus Im p(t)/t, whose principal-value integral is pi for X > 0.
  // Im p(t)/t = m + Im R(t)/t with R(t) = 1 - p(-t) - i t m.
  const Integrand f = [&spec, m](double t) -> ComplexValue {
    const ComplexValue phat = char_fn(spec, t);
    const ComplexValue rem = centered_char_remainder(spec, t);
    return phat * rem / (t * t * m) - m - rem.imag() / t;
  };
  QuadratureSpec line = q;
  line.tail_decay_order = std::max(q.tail_decay_order, 3.0);
  // p g ~ t^(alpha-2) near 0 for Pareto with alpha < 2
  line.grading_levels = std::max(q.grading_levels, 60);
  const QuadratureResult qr = integrate_line(f, line);
  GiniResult r = fourier_result(qr, 1.0 / (2.0 * kPi), 0.5, GiniMethod::FourierContinuous);
  return r;
}

GiniResult gini_nb_fourier(double k, double p, const QuadratureSpec& q) {
  // validates k and p
  const DistributionSpec spec = DistributionSpec::negative_binomial(k, p);
  const double qq = 1.0 - p;
  const double m = mean(spec);
  const double ratio = qq / p;
  const Integrand f = [k, p, qq, m, ratio](double t) -> ComplexValue {
    const double s = std::sin(0.5 * t);
    const double s2 = s * s;
    // P = (p e^{it} / (e^{it} + p - 1))^k = p(-t)
    const ComplexValue z(2.0 * ratio * s2, ratio * std::sin(t));
    const ComplexValue P_m1 = complex_expm1(-k * complex_log1p(z));
    // Q = (p^2 / (p^2 + 2(p-1)(cos t - 1)))^k = |p(t)|^2
    const double Q_m1 = std::expm1(-k * std::log1p(4.0 * qq * s2 / (p * p)));
    const ComplexValue e_minus(-2.0 * s2, -std::sin(t));
    const ComplexValue numerator = P_m1 - Q_m1 - m * e_minus * (1.0 + P_m1);
    return numerator / (4.0 * s2);
  };
  const double prefactor = p / (k * qq) / (2.0 * kPi);
  const double limit = (second_moment(spec) + m) / 2.0;
  const QuadratureResult qr = integrate_periodic(f, q, limit);
  return fourier_result(qr, prefactor, 0.0, GiniMethod::NBFourier);
}

GiniResult gini_nb_series(double k, double p, std::int64_t max_terms) {
  DistributionSpec::negative_binomial(k, p);
  const double x = (1.0 - p) / (p * p);
  if (!(p > kSeriesBoundary) || !(4.0 * x < 1.0)) {
    throw DomainError(fmt::format(
        "nb-series: diverges for p = {} (needs 4(1-p)/p^2 < 1, i.e. p > 2(sqrt(2)-1) = {:.7f}); "
        "the series is numerically unstable near that boundary",
        p, kSeriesBoundary));
  }
  if (max_terms < 1) throw DomainError("nb-series: max_terms must be positive");
  // t_i = (-1)^i C(k+i, i) x^i Cat_i, t_{i+1}/t_i = -x (k+i+1)/(i+1) * 2(2i+1)/(i+2)
  double term = 1.0;
  std::vector<double> terms{term};
  std::int64_t i = 0;
  for (; i + 1 < max_terms; ++i) {
    const double di = static_cast<double>(i);
    term *= -x * (k + di + 1.0) / (di + 1.0) * 2.0 * (2.0 * di + 1.0) / (di + 2.0);
    terms.push_back(term);
    if (std::abs(term) < 1e-17 && di > k) break;
  }
  GiniResult r;
  r.method = GiniMethod::NBSeries;
  r.value = kernels::ordered_sum(terms) / p;
  r.abs_error_estimate = std::abs(terms.back()) / p;
  r.truncation_tail_bound = r.abs_error_estimate;
  r.terms = static_cast<std::int64_t>(terms.size());
  return finalize(r);
}

GiniResult gini_classic_pairwise(const DistributionSpec& spec, double tol,
                                 std::int64_t max_support, Exec exec) {
  require_discrete(spec, "pairwise");
  const Truncation t = find_truncation(spec, tol, max_support, "pairwise");
  const double m = mean(spec);
  const std::vector<double> p = pmf_table(spec, t.J);
  const std::vector<double> rows = kernels::pairwise_rows(p, exec);
  GiniResult r;
  r.method = GiniMethod::ClassicPairwise;
  // sum |i-j| p_i p_j = 2 sum rows; divided by 2m
  r.value = kernels::ordered_sum(rows) / m;
  r.truncation_tail_bound = (t.first_moment + m * t.tail) / m;
  r.markov_tail_bound = t.markov;
  r.abs_error_estimate = *r.truncation_tail_bound;
  r.terms = t.J;
  return finalize(r);
}

namespace {

// Per-block sums of a pair statistic, reduced in block order.
struct BlockSums {
  std::vector<double> numerator;
  std::vector<double> denominator;
};

template <class Numerator, class Denominator>
BlockSums block_sums(std::size_t n, Exec exec, Numerator num, Denominator den) {
  const std::size_t blocks = std::min<std::size_t>(n, 4096);
  BlockSums out{std::vector<double>(blocks), std::vector<double>(blocks)};
  auto run = [&](std::size_t b) {
    double a = 0.0;
    double c = 0.0;
    for (std::size_t i = b * n / blocks; i < (b + 1) * n / blocks; ++i) {
      a += num(i);
      c += den(i);
    }
    out.numerator[b] = a;
    out.denominator[b] = c;
  };
  if (exec == Exec::Parallel) {
    const auto count = static_cast<std::int64_t>(blocks);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < count; ++b) run(b);
  } else {
    for (std::size_t b = 0; b < blocks; ++b) run(b);
  }
  return out;
}

// Block-bootstrap standard error of transform(sum numerator / sum denominator).
template <class Transform>
double block_bootstrap_se(const BlockSums& sums, std::uint64_t seed, Transform transform) {
  constexpr int kResamples = 200;
  const std::size_t blocks = sums.numerator.size();
  std::vector<double> replicas(kResamples);
  for (int b = 0; b < kResamples; ++b) {
    std::mt19937_64 rng(mix_seed(seed, b));
    std::uniform_int_distribution<std::size_t> pick(0, blocks - 1);
    double a = 0.0;
    double c = 0.0;
    for (std::size_t i = 0; i < blocks; ++i) {
      const std::size_t j = pick(rng);
      a += sums.numerator[j];
      c += sums.denominator[j];
    }
    replicas[b] = transform(c > 0.0 ? a / c : 0.0);
  }
  const double centre = kernels::ordered_sum(replicas) / kResamples;
  double var = 0.0;
  for (double v : replicas) var += (v - centre) * (v - centre);
  return std::sqrt(var / (kResamples - 1));
}

}  // namespace

GiniResult gini_pair_estimate(std::span<const double> x1, std::span<const double> x2,
                              std::uint64_t seed, Exec exec) {
  if (x1.size() != x2.size() || x1.empty()) {
    throw DomainError("monte-carlo: pair samples must be nonempty and of equal length");
  }
  const BlockSums sums = block_sums(
      x1.size(), exec, [&](std::size_t i) { return std::abs(x1[i] - x2[i]); },
      [&](std::size_t i) { return x1[i] + x2[i]; });
  const double total = kernels::ordered_sum(sums.denominator);
  if (!(total > 0.0)) throw DomainError("monte-carlo: sample mean is zero");
  GiniResult r;
  r.method = GiniMethod::MonteCarlo;
  // mean|X1 - X2| / (2 * mean of all 2n draws)
  r.value = kernels::ordered_sum(sums.numerator) / total;
  r.mc_standard_error = block_bootstrap_se(sums, seed, [](double g) { return g; });
  r.abs_error_estimate = *r.mc_standard_error;
  r.terms = static_cast<std::int64_t>(x1.size());
  return finalize(r);
}

GiniResult gini_pair_estimate_min(std::span<const double> x1, std::span<const double> x2,
                                  double known_mean, std::uint64_t seed, Exec exec) {
  if (x1.size() != x2.size() || x1.empty()) {
    throw DomainError("monte-carlo: pair samples must be nonempty and of equal length");
  }
  if (!(known_mean > 0.0)) throw DomainError("monte-carlo: mean must be positive");
  const BlockSums sums = block_sums(
      x1.size(), exec, [&](std::size_t i) { return std::min(x1[i], x2[i]); },
      [](std::size_t) { return 1.0; });
  GiniResult r;
  r.method = GiniMethod::MonteCarlo;
  const double mean_min = kernels::ordered_sum(sums.numerator) / static_cast<double>(x1.size());
  r.value = 1.0 - mean_min / known_mean;
  r.mc_standard_error =
      block_bootstrap_se(sums, seed, [known_mean](double v) { return 1.0 - v / known_mean; });
  r.abs_error_estimate = *r.mc_standard_error;
  r.terms = static_cast<std::int64_t>(x1.size());
  return finalize(r);
}

GiniResult gini_monte_carlo(const DistributionSpec& spec, std::int64_t n_pairs, std::uint64_t seed,
                            Exec exec) {
  if (n_pairs < 1000) {
    throw DomainError(fmt::format("monte-carlo: needs at least 1000 pairs (got {})", n_pairs));
  }
  const auto n = static_cast<std::size_t>(n_pairs);
  const std::vector<double> x1 = sample(spec, mix_seed(seed, 0), n, exec);
  const std::vector<double> x2 = sample(spec, mix_seed(seed, 1), n, exec);
  if (!std::isfinite(second_moment(spec))) {
    return gini_pair_estimate_min(x1, x2, mean(spec), mix_seed(seed, 2), exec);
  }
  return gini_pair_estimate(x1, x2, mix_seed(seed, 2), exec);
}

ComplexValue excess_tail_transform(const DistributionSpec& spec, double theta) {
  require_discrete(spec, "excess_tail_transform");
  theta = std::remainder(theta, 2.0 * kPi);
  const double s = std::sin(0.5 * theta);
  const double s2 = s * s;
  if (s2 == 0.0) throw DomainError("excess_tail_transform: removable singularity at theta = 0");
  const double m = mean(spec);
  const ComplexValue one_minus_p = -complex_expm1(log_char_fn_discrete(spec, theta));
  const ComplexValue e_minus(-2.0 * s2, -std::sin(theta));
  return (one_minus_p - m * e_minus) / (4.0 * s2 * m);
}

ComplexValue excess_tail_transform_continuous(const DistributionSpec& spec, double theta) {
  if (theta == 0.0) {
    throw DomainError("excess_tail_transform_continuous: removable singularity at theta = 0");
  }
  return centered_char_remainder(spec, theta) / (theta * theta * mean(spec));
}

bool method_applicable(const DistributionSpec& spec, GiniMethod method) {
  const bool nb = spec.is_negative_binomial();
  switch (method) {
    case GiniMethod::ClosedForm:
      return std::holds_alternative<Exponential>(spec.params()) ||
             std::holds_alternative<Geometric>(spec.params()) ||
             std::holds_alternative<Pareto>(spec.params()) ||
             std::holds_alternative<UniformContinuous>(spec.params());
    case GiniMethod::ExcessSum:
    case GiniMethod::FourierDiscrete:
    case GiniMethod::FourierDiscreteAlt:
    case GiniMethod::ClassicPairwise:
      return spec.is_discrete();
    case GiniMethod::FourierContinuous:
      return !spec.is_discrete();
    case GiniMethod::NBFourier:
    case GiniMethod::AsymptoticSmallK:
    case GiniMethod::AsymptoticLargeK:
      return nb;
    case GiniMethod::NBSeries: {
      if (!nb) return false;
      const double p = std::get<NegativeBinomial>(spec.params()).p;
      return p > kSeriesBoundary && 4.0 * (1.0 - p) / (p * p) < 1.0;
    }
    case GiniMethod::MonteCarlo:
      return true;
    case GiniMethod::Empirical:
      return false;
  }
  return false;
}

GiniResult compute_gini(const DistributionSpec& spec, GiniMethod method, const QuadratureSpec& q,
                        std::uint64_t seed, std::int64_t mc_pairs) {
  const auto nb_params = [&spec](const char* what) {
    if (!spec.is_negative_binomial()) {
      throw UnsupportedError(fmt::format("{}: only defined for the negative binomial", what));
    }
    return std::get<NegativeBinomial>(spec.params());
  };
  switch (method) {
    case GiniMethod::ClosedForm:
      return gini_closed_form(spec);
    case GiniMethod::ExcessSum:
      return gini_excess_sum(spec);
    case GiniMethod::FourierDiscrete:
      return gini_fourier_discrete(spec, q, FourierVariant::SquaredMagnitude);
    case GiniMethod::FourierDiscreteAlt:
      return gini_fourier_discrete(spec, q, FourierVariant::Product);
    case GiniMethod::FourierContinuous:
      return gini_fourier_continuous(spec, q);
    case GiniMethod::NBFourier: {
      const auto nb = nb_params("nb-fourier");
      return gini_nb_fourier(nb.k, nb.p, q);
    }
    case GiniMethod::NBSeries: {
      const auto nb = nb_params("nb-series");
      return gini_nb_series(nb.k, nb.p);
    }
    case GiniMethod::ClassicPairwise:
      return gini_classic_pairwise(spec);
    case GiniMethod::MonteCarlo:
      return gini_monte_carlo(spec, mc_pairs, seed);
    case GiniMethod::AsymptoticSmallK: {
      const auto nb = nb_params("small-k");
      return gini_small_k(nb.k, nb.p);
    }
    case GiniMethod::AsymptoticLargeK: {
      const auto nb = nb_params("large-k");
      return gini_large_k(nb.k, nb.p / (1.0 - nb.p));
    }
    case GiniMethod::Empirical:
      break;
  }
  throw UnsupportedError(
      fmt::format("{}: not a parametric method", method_name(method)));
}

}  // namespace ginikit
