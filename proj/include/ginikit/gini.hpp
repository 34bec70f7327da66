#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ginikit/distributions.hpp"
#include "ginikit/quadrature.hpp"

namespace ginikit {

enum class GiniMethod {
  ClosedForm,
  ExcessSum,
  FourierDiscrete,     // squared-magnitude integrand
  FourierDiscreteAlt,  // product integrand
  FourierContinuous,
  NBFourier,
  NBSeries,
  ClassicPairwise,
  MonteCarlo,
  AsymptoticSmallK,
  AsymptoticLargeK,
  Empirical,
};

/// Stable CLI/report name, e.g. "nb-fourier".
std::string_view method_name(GiniMethod method);
std::optional<GiniMethod> parse_method(std::string_view name);
std::vector<GiniMethod> all_methods();

struct GiniResult {
  double value = 0.0;
  GiniMethod method = GiniMethod::ClosedForm;
  double abs_error_estimate = 0.0;
  /// |Im| of the Fourier integral before the real part is taken.
  std::optional<double> imag_residual;
  /// Rigorous bound on what truncating a sum at `terms` neglects.
  std::optional<double> truncation_tail_bound;
  /// Markov bound mean/(J+1) at the same truncation point, for reference.
  std::optional<double> markov_tail_bound;
  std::optional<double> mc_standard_error;
  /// Sum truncation index, series terms, quadrature evaluations or pairs.
  std::int64_t terms = 0;
  /// Value was nudged into [0,1] by less than its error estimate.
  bool clamped = false;
  /// Asymptotic formula evaluated where it yields a value outside [0,1].
  bool out_of_domain = false;
};

enum class FourierVariant { SquaredMagnitude, Product };

/// Largest accepted imaginary residual of a Fourier result.
inline constexpr double kImagResidualLimit = 1e-6;

/// Default tolerance for the truncated sums.
inline constexpr double kDefaultSumTolerance = 1e-12;

GiniResult gini_closed_form(const DistributionSpec& spec);

/// sum_j P(X=j) P(X*_d >= j), truncated by a geometric tail bound.
GiniResult gini_excess_sum(const DistributionSpec& spec, double tol = kDefaultSumTolerance);

GiniResult gini_fourier_discrete(const DistributionSpec& spec, const QuadratureSpec& q = {},
                                 FourierVariant variant = FourierVariant::SquaredMagnitude);

GiniResult gini_fourier_continuous(const DistributionSpec& spec, const QuadratureSpec& q = {});

GiniResult gini_nb_fourier(double k, double p, const QuadratureSpec& q = {});

/// Alternating Catalan series; valid only for p > 2(sqrt 2 - 1).
GiniResult gini_nb_series(double k, double p, std::int64_t max_terms = 100000);

/// Truncated E|X1 - X2| / (2 E X). Refuses supports longer than `max_support`.
GiniResult gini_classic_pairwise(const DistributionSpec& spec, double tol = kDefaultSumTolerance,
                                 std::int64_t max_support = 200000, Exec exec = Exec::Parallel);

/// Monte-Carlo estimate of E|X1 - X2| / (2 E X) from n_pairs independent pairs,
/// with a block-bootstrap standard error. When E[X^2] is infinite the ratio
/// of sample means has no usable standard error, so the estimate switches to
/// 1 - mean(min(X1, X2)) / E[X], whose summands have finite variance.
GiniResult gini_monte_carlo(const DistributionSpec& spec, std::int64_t n_pairs,
                            std::uint64_t seed, Exec exec = Exec::Parallel);

/// The ratio estimator on given pair samples x1[i], x2[i].
GiniResult gini_pair_estimate(std::span<const double> x1, std::span<const double> x2,
                              std::uint64_t seed, Exec exec = Exec::Parallel);

/// 1 - mean(min(x1[i], x2[i])) / known_mean.
GiniResult gini_pair_estimate_min(std::span<const double> x1, std::span<const double> x2,
                                  double known_mean, std::uint64_t seed,
                                  Exec exec = Exec::Parallel);

/// g(theta) = (1 - p(theta) - E[X](e^{-i theta} - 1)) / (|e^{i theta} - 1|^2 E[X]),
/// the transform of j -> P(X*_d >= j). Domain error at theta = 0 mod 2 pi.
ComplexValue excess_tail_transform(const DistributionSpec& spec, double theta);

/// Continuous analogue (1 - p(-theta) - i theta E[X]) / (theta^2 E[X]).
/// Domain error at theta = 0.
ComplexValue excess_tail_transform_continuous(const DistributionSpec& spec, double theta);

/// log E[exp(i theta X)] for discrete laws, accurate near theta = 0.
ComplexValue log_char_fn_discrete(const DistributionSpec& spec, double theta);

/// Dispatch by method with default settings. MonteCarlo uses `seed` and
/// `mc_pairs`; asymptotic methods require a negative binomial.
GiniResult compute_gini(const DistributionSpec& spec, GiniMethod method,
                        const QuadratureSpec& q = {}, std::uint64_t seed = 0,
                        std::int64_t mc_pairs = 1000000);

/// Whether `method` can be evaluated for `spec` (NBSeries also needs p in
/// its convergence domain).
bool method_applicable(const DistributionSpec& spec, GiniMethod method);

}  // namespace ginikit
