#pragma once

#include <cstdint>

#include "ginikit/gini.hpp"

namespace ginikit {

/// Negative binomial NB(k, p) seen as Poisson with a Gamma(k, lambda) rate,
/// lambda = p/(1-p).
struct AsymptoticConstants {
  double lambda_;
  /// G = 1 + c k + o(k) as k -> 0.
  double small_k_slope_c;
  /// sqrt(k) G -> sqrt((1 + lambda)/pi) as k -> infinity.
  double large_k_limit;
  /// Scale of the normal limit of (X_k - k/lambda)/sqrt(k).
  double sigma;
};

AsymptoticConstants asymptotic_constants(double p);

double lambda_from_p(double p);
double p_from_lambda(double lambda);

/// c = 2 log(lambda/(lambda+1)) - (lambda+2) log((lambda^2+2 lambda)/(lambda+1)^2).
double small_k_slope(double p);

/// 1 + c k. Flagged out_of_domain (never clamped) when it leaves [0,1].
GiniResult gini_small_k(double k, double p);

/// sqrt((1 + lambda)/pi) / sqrt(k).
GiniResult gini_large_k(double k, double lambda);

/// c_j = 1/(j (lambda+1)^j), j >= 1.
double appendix_c_j(std::int64_t j, double lambda);

/// d*_j = x^j - j lambda sum_{n>=j} x^{n+1}/(n+1), x = 1/(lambda+1), j >= 1.
double appendix_d_star_j(std::int64_t j, double lambda);

/// sum_j c_j d*_j - log((lambda+1)/lambda); equals the small-k slope.
double small_k_slope_from_series(double lambda);

struct PmfCheck {
  /// 1 - k log((lambda+1)/lambda) for j = 0, c_j k otherwise.
  double approx;
  /// NB(k, lambda/(lambda+1)) mass at j.
  double exact;
};

PmfCheck small_k_pmf_check(std::int64_t j, double k, double lambda);

struct CltSummary {
  std::int64_t n;
  double mean;
  double variance;
  /// Kolmogorov-Smirnov distance to the standard normal.
  double ks;
};

/// Samples Z = (X_k - k/lambda)/(sigma sqrt(k)) and summarises it. Requires
/// k >= 100 and n_samples >= 1.
CltSummary clt_normalization_check(double k, double lambda, std::int64_t n_samples,
                                   std::uint64_t seed, Exec exec = Exec::Parallel);

}  // namespace ginikit
