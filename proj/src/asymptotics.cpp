#include "ginikit/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "ginikit/error.hpp"
#include "ginikit/sampling.hpp"

namespace ginikit {

namespace {

void require_p(double p, const char* op) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError(fmt::format("{}: p must lie in (0,1) (got {})", op, p));
}

void require_positive(double v, const char* what, const char* op) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw DomainError(fmt::format("{}: {} must be > 0 (got {})", op, what, v));
  }
}

constexpr double kSeriesTail = 1e-14;

}  // namespace

double lambda_from_p(double p) {
  require_p(p, "lambda_from_p");
  return p / (1.0 - p);
}

double p_from_lambda(double lambda) {
  require_positive(lambda, "lambda", "p_from_lambda");
  return lambda / (lambda + 1.0);
}

double small_k_slope(double p) {
  const double l = lambda_from_p(p);
  // log((l^2 + 2l)/(l+1)^2) = log1p(-1/(l+1)^2)
  const double inv = 1.0 / (l + 1.0);
  return 2.0 * std::log(l / (l + 1.0)) - (l + 2.0) * std::log1p(-inv * inv);
}

AsymptoticConstants asymptotic_constants(double p) {
  const double l = lambda_from_p(p);
  return {l, small_k_slope(p), std::sqrt((1.0 + l) / std::numbers::pi), std::sqrt(1.0 + l) / l};
}

GiniResult gini_small_k(double k, double p) {
  require_positive(k, "k", "small-k");
  GiniResult r;
  r.method = GiniMethod::AsymptoticSmallK;
  r.value = 1.0 + small_k_slope(p) * k;
  r.out_of_domain = r.value < 0.0 || r.value > 1.0;
  return r;
}

GiniResult gini_large_k(double k, double lambda) {
  require_positive(k, "k", "large-k");
  require_positive(lambda, "lambda", "large-k");
  GiniResult r;
  r.method = GiniMethod::AsymptoticLargeK;
  r.value = std::sqrt((1.0 + lambda) / std::numbers::pi) / std::sqrt(k);
  r.out_of_domain = r.value > 1.0;
  return r;
}

double appendix_c_j(std::int64_t j, double lambda) {
  if (j < 1) throw DomainError("appendix_c_j: j must be >= 1");
  require_positive(lambda, "lambda", "appendix_c_j");
  return std::exp(-static_cast<double>(j) * std::log1p(lambda)) / static_cast<double>(j);
}

double appendix_d_star_j(std::int64_t j, double lambda) {
  if (j < 1) throw DomainError("appendix_d_star_j: j must be >= 1");
  require_positive(lambda, "lambda", "appendix_d_star_j");
  const double x = 1.0 / (lambda + 1.0);
  const double log_x = -std::log1p(lambda);
  // sum_{n>=j} x^{n+1}/(n+1), stopped once the geometric tail bound
  // x^{n+1}/(1-x) drops below the target
  double sum = 0.0;
  double carry = 0.0;
  for (std::int64_t n = j;; ++n) {
    const double power = std::exp(static_cast<double>(n + 1) * log_x);
    const double term = power / static_cast<double>(n + 1);
    const double t = sum + term;
    carry += (sum - t) + term;
    sum = t;
    if (power / (1.0 - x) < kSeriesTail * std::max(1.0, sum)) break;
  }
  return std::exp(static_cast<double>(j) * log_x) - static_cast<double>(j) * lambda * (sum + carry);
}

double small_k_slope_from_series(double lambda) {
  require_positive(lambda, "lambda", "small_k_slope_from_series");
  const double x = 1.0 / (lambda + 1.0);
  double sum = 0.0;
  double carry = 0.0;
  for (std::int64_t j = 1;; ++j) {
    const double term = appendix_c_j(j, lambda) * appendix_d_star_j(j, lambda);
    const double t = sum + term;
    carry += (sum - t) + term;
    sum = t;
    // c_j d*_j <= x^j / j, so the rest is below x^{j+1}/((j+1)(1-x))
    const double rest = std::exp(static_cast<double>(j + 1) * std::log(x)) /
                        (static_cast<double>(j + 1) * (1.0 - x));
    if (rest < kSeriesTail) break;
  }
  return (sum + carry) - std::log1p(1.0 / lambda);
}

PmfCheck small_k_pmf_check(std::int64_t j, double k, double lambda) {
  if (j < 0) throw DomainError("small_k_pmf_check: j must be >= 0");
  require_positive(k, "k", "small_k_pmf_check");
  const DistributionSpec spec = DistributionSpec::negative_binomial(k, p_from_lambda(lambda));
  const double approx = j == 0 ? 1.0 - k * std::log1p(1.0 / lambda) : appendix_c_j(j, lambda) * k;
  return {approx, pmf(spec, j)};
}

CltSummary clt_normalization_check(double k, double lambda, std::int64_t n_samples,
                                   std::uint64_t seed, Exec exec) {
  if (n_samples < 1) throw DomainError("clt_normalization_check: no samples requested");
  if (!(k >= 100.0)) {
    throw DomainError(fmt::format("clt_normalization_check: k must be >= 100 (got {})", k));
  }
  require_positive(lambda, "lambda", "clt_normalization_check");
  const DistributionSpec spec = DistributionSpec::negative_binomial(k, p_from_lambda(lambda));
  std::vector<double> z = sample(spec, seed, static_cast<std::size_t>(n_samples), exec);
  const double sigma = std::sqrt(1.0 + lambda) / lambda;
  const double centre = k / lambda;
  const double scale = 1.0 / (sigma * std::sqrt(k));
  for (double& v : z) v = (v - centre) * scale;

  const auto n = static_cast<double>(n_samples);
  double mean = 0.0;
  for (double v : z) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : z) var += (v - mean) * (v - mean);
  var /= n > 1.0 ? n - 1.0 : 1.0;

  // KS distance with ties: compare Phi(v) with the ECDF just below and at v.
  std::sort(z.begin(), z.end());
  double ks = 0.0;
  std::size_t i = 0;
  while (i < z.size()) {
    std::size_t next = i;
    while (next < z.size() && z[next] == z[i]) ++next;
    const double phi = 0.5 * std::erfc(-z[i] / std::numbers::sqrt2);
    ks = std::max({ks, std::abs(static_cast<double>(i) / n - phi),
                   std::abs(static_cast<double>(next) / n - phi)});
    i = next;
  }
  return {n_samples, mean, var, ks};
}

}  // namespace ginikit
