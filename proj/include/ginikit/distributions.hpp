#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <variant>

namespace ginikit {

using ComplexValue = std::complex<double>;

struct Poisson {
  double lambda;
};

/// support_start 0: P(X=j) = (1-p)^j p on {0,1,...};
/// support_start 1: P(X=j) = (1-p)^(j-1) p on {1,2,...}.
struct Geometric {
  double p;
  int support_start;
};

/// k is real ("number of successes"), p the success probability.
struct NegativeBinomial {
  double k;
  double p;
};

struct Exponential {
  double rate;
};

struct Pareto {
  double alpha;
  double x_m;
};

struct UniformContinuous {
  double a;
  double b;
};

/// Validated parametric law of a nonnegative random variable with finite,
/// positive mean. Only the named constructors can build one.
class DistributionSpec {
 public:
  using Params =
      std::variant<Poisson, Geometric, NegativeBinomial, Exponential, Pareto, UniformContinuous>;

  static DistributionSpec poisson(double lambda);
  static DistributionSpec geometric(double p, int support_start = 0);
  static DistributionSpec negative_binomial(double k, double p);
  static DistributionSpec exponential(double rate);
  static DistributionSpec pareto(double alpha, double x_m = 1.0);
  static DistributionSpec uniform(double a, double b);

  const Params& params() const noexcept { return params_; }
  bool is_discrete() const noexcept;
  bool is_negative_binomial() const noexcept {
    return std::holds_alternative<NegativeBinomial>(params_);
  }

  /// Short human-readable form, e.g. "negbinom(k=0.06, p=0.008)".
  std::string describe() const;

 private:
  explicit DistributionSpec(Params params) : params_(params) {}
  Params params_;
};

// Mass, density and tails --------------------------------------------------

/// P(X = j). Throws UnsupportedError for continuous laws.
double pmf(const DistributionSpec& spec, std::int64_t j);
/// log P(X = j); -inf outside the support.
double log_pmf(const DistributionSpec& spec, std::int64_t j);
/// Density at x. Throws UnsupportedError for discrete laws.
double pdf(const DistributionSpec& spec, double x);
/// P(X > x).
double tail(const DistributionSpec& spec, double x);

double mean(const DistributionSpec& spec);
/// E[X^2]; +inf when it diverges (Pareto with alpha <= 2).
double second_moment(const DistributionSpec& spec);

/// E[exp(i theta X)].
ComplexValue char_fn(const DistributionSpec& spec, double theta);

/// 1 - char_fn(-theta) - i theta E[X], i.e. E[1 - exp(-i theta X) - i theta X],
/// evaluated without the cancellation the literal expression suffers near 0.
/// Continuous laws only.
ComplexValue centered_char_remainder(const DistributionSpec& spec, double theta);

// Excess (integrated-tail) law --------------------------------------------

/// P(X* >= x) = (1/E[X]) * int_x^inf P(X > s) ds. Valid for every law.
double excess_tail(const DistributionSpec& spec, double x);
/// P(X*_d >= j) where P(X*_d = i) = P(X > i)/E[X]. Discrete laws only.
double excess_tail_discrete(const DistributionSpec& spec, std::int64_t j);

// Truncation support for discrete sums ------------------------------------

/// sup over i >= j of P(X=i+1)/P(X=i); +inf when no finite bound is known.
double pmf_ratio_bound(const DistributionSpec& spec, std::int64_t j);
/// Upper bound on P(X > j) from the ratio bound: pmf(j+1)/(1 - rho).
/// Returns +inf when the ratio bound is not below one.
double tail_ratio_bound(const DistributionSpec& spec, std::int64_t j);
/// Upper bound on E[X ; X > j] from the same geometric domination.
double tail_first_moment_bound(const DistributionSpec& spec, std::int64_t j);

}  // namespace ginikit
