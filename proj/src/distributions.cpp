#include "ginikit/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "ginikit/error.hpp"
#include "pareto_transform.hpp"

namespace ginikit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

bool open_unit(double p) { return std::isfinite(p) && p > 0.0 && p < 1.0; }

// 1 - cos(theta), without cancellation near 0.
double one_minus_cos(double theta) {
  const double s = std::sin(0.5 * theta);
  return 2.0 * s * s;
}

// log(1 - q e^{i theta}) for 0 < q < 1.
ComplexValue log_one_minus(double q, double theta) {
  const double p = 1.0 - q;
  return std::log(ComplexValue(p + q * one_minus_cos(theta), -q * std::sin(theta)));
}

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

// Forward sum of sum_{i > j} w(i) pmf(i) with the remainder dominated by a
// geometric series. `weight` must be nondecreasing and at most linear in i.
template <class Weight>
double upper_sum(const DistributionSpec& spec, std::int64_t j, Weight weight) {
  CompensatedSum acc;
  constexpr std::int64_t kMaxSteps = 100'000'000;
  for (std::int64_t i = j + 1; i - j < kMaxSteps; ++i) {
    const double mass = pmf(spec, i);
    acc.add(weight(i) * mass);
    const double rho = pmf_ratio_bound(spec, i);
    if (rho < 1.0) {
      const double next = mass * rho;
      // remainder <= next * [w(i+1)/(1-rho) + rho/(1-rho)^2]
      const double remainder =
          next * (weight(i + 1) / (1.0 - rho) + rho / ((1.0 - rho) * (1.0 - rho)));
      if (remainder <= 1e-17 * std::abs(acc.value()) || remainder < 1e-300) break;
    }
  }
  return acc.value();
}

double discrete_tail(const DistributionSpec& spec, std::int64_t j) {
  if (j < 0) return 1.0;
  if (const auto* g = std::get_if<Geometric>(&spec.params())) {
    const double q = 1.0 - g->p;
    return g->support_start == 0 ? std::pow(q, static_cast<double>(j + 1))
                                 : std::pow(q, static_cast<double>(j));
  }
  // Lower cumulative sum while the answer is large, otherwise sum the upper
  // tail directly so deep tails keep their relative precision.
  const double m = mean(spec);
  if (static_cast<double>(j) < m) {
    CompensatedSum cdf;
    for (std::int64_t i = 0; i <= j; ++i) cdf.add(pmf(spec, i));
    if (cdf.value() <= 0.5) return 1.0 - cdf.value();
  }
  return upper_sum(spec, j, [](std::int64_t) { return 1.0; });
}

// E[(X - j)^+] for integer j >= 0.
double mean_excess(const DistributionSpec& spec, std::int64_t j) {
  if (j <= 0) return mean(spec) - static_cast<double>(j);
  if (const auto* g = std::get_if<Geometric>(&spec.params())) {
    const double q = 1.0 - g->p;
    // sum_{i >= j} P(X > i)
    const double first = g->support_start == 0 ? std::pow(q, static_cast<double>(j + 1))
                                               : std::pow(q, static_cast<double>(j));
    return first / g->p;
  }
  const double jd = static_cast<double>(j);
  return upper_sum(spec, j, [jd](std::int64_t i) { return static_cast<double>(i) - jd; });
}

}  // namespace

// Construction ---------------------------------------------------------------

DistributionSpec DistributionSpec::poisson(double lambda) {
  require(finite_positive(lambda), fmt::format("poisson: lambda must be > 0 (got {})", lambda));
  return DistributionSpec(Poisson{lambda});
}

DistributionSpec DistributionSpec::geometric(double p, int support_start) {
  require(open_unit(p), fmt::format("geometric: p must lie in (0,1) (got {})", p));
  require(support_start == 0 || support_start == 1,
          fmt::format("geometric: support start must be 0 or 1 (got {})", support_start));
  return DistributionSpec(Geometric{p, support_start});
}

DistributionSpec DistributionSpec::negative_binomial(double k, double p) {
  require(finite_positive(k), fmt::format("negbinom: k must be > 0 (got {})", k));
  require(open_unit(p), fmt::format("negbinom: p must lie in (0,1) (got {})", p));
  return DistributionSpec(NegativeBinomial{k, p});
}

DistributionSpec DistributionSpec::exponential(double rate) {
  require(finite_positive(rate), fmt::format("exponential: rate must be > 0 (got {})", rate));
  return DistributionSpec(Exponential{rate});
}

DistributionSpec DistributionSpec::pareto(double alpha, double x_m) {
  require(std::isfinite(alpha) && alpha > 1.0,
          fmt::format("pareto: alpha must be > 1 for a finite mean (got {})", alpha));
  require(finite_positive(x_m), fmt::format("pareto: x_m must be > 0 (got {})", x_m));
  return DistributionSpec(Pareto{alpha, x_m});
}

DistributionSpec DistributionSpec::uniform(double a, double b) {
  require(std::isfinite(a) && a >= 0.0, fmt::format("uniform: a must be >= 0 (got {})", a));
  require(std::isfinite(b) && b > a, fmt::format("uniform: b must exceed a (got a={}, b={})", a, b));
  return DistributionSpec(UniformContinuous{a, b});
}

bool DistributionSpec::is_discrete() const noexcept {
  return std::holds_alternative<Poisson>(params_) || std::holds_alternative<Geometric>(params_) ||
         std::holds_alternative<NegativeBinomial>(params_);
}

std::string DistributionSpec::describe() const {
  return std::visit(
      Overloaded{
          [](const Poisson& d) { return fmt::format("poisson(lambda={})", d.lambda); },
          [](const Geometric& d) {
            return fmt::format("geometric(p={}, start={})", d.p, d.support_start);
          },
          [](const NegativeBinomial& d) { return fmt::format("negbinom(k={}, p={})", d.k, d.p); },
          [](const Exponential& d) { return fmt::format("exponential(rate={})", d.rate); },
          [](const Pareto& d) { return fmt::format("pareto(alpha={}, x_m={})", d.alpha, d.x_m); },
          [](const UniformContinuous& d) { return fmt::format("uniform(a={}, b={})", d.a, d.b); },
      },
      params_);
}

// Mass and density -------------------------------------------------------------

double log_pmf(const DistributionSpec& spec, std::int64_t j) {
  if (!spec.is_discrete()) {
    throw UnsupportedError("pmf: " + spec.describe() + " is continuous");
  }
  if (j < 0) return -kInf;
  const double jd = static_cast<double>(j);
  return std::visit(
      Overloaded{
          [&](const Poisson& d) { return jd * std::log(d.lambda) - d.lambda - std::lgamma(jd + 1.0); },
          [&](const Geometric& d) {
            if (j < d.support_start) return -kInf;
            return (jd - d.support_start) * std::log1p(-d.p) + std::log(d.p);
          },
          [&](const NegativeBinomial& d) {
            // Gamma-ratio binomial coefficient so that real k works.
            return std::lgamma(d.k + jd) - std::lgamma(jd + 1.0) - std::lgamma(d.k) +
                   d.k * std::log(d.p) + jd * std::log1p(-d.p);
          },
          [](const auto&) { return -kInf; },
      },
      spec.params());
}

double pmf(const DistributionSpec& spec, std::int64_t j) { return std::exp(log_pmf(spec, j)); }

double pdf(const DistributionSpec& spec, double x) {
  return std::visit(
      Overloaded{
          [&](const Exponential& d) { return x < 0.0 ? 0.0 : d.rate * std::exp(-d.rate * x); },
          [&](const Pareto& d) {
            return x < d.x_m ? 0.0 : d.alpha * std::pow(d.x_m, d.alpha) / std::pow(x, d.alpha + 1.0);
          },
          [&](const UniformContinuous& d) { return (x < d.a || x > d.b) ? 0.0 : 1.0 / (d.b - d.a); },
          [&](const auto&) -> double {
            throw UnsupportedError("pdf: " + spec.describe() + " is discrete");
          },
      },
      spec.params());
}

double tail(const DistributionSpec& spec, double x) {
  if (spec.is_discrete()) {
    if (x < 0.0) return 1.0;
    return discrete_tail(spec, static_cast<std::int64_t>(std::floor(x)));
  }
  return std::visit(
      Overloaded{
          [&](const Exponential& d) { return x <= 0.0 ? 1.0 : std::exp(-d.rate * x); },
          [&](const Pareto& d) { return x <= d.x_m ? 1.0 : std::pow(d.x_m / x, d.alpha); },
          [&](const UniformContinuous& d) {
            if (x <= d.a) return 1.0;
            if (x >= d.b) return 0.0;
            return (d.b - x) / (d.b - d.a);
          },
          [](const auto&) { return 0.0; },
      },
      spec.params());
}

double mean(const DistributionSpec& spec) {
  return std::visit(
      Overloaded{
          [](const Poisson& d) { return d.lambda; },
          [](const Geometric& d) {
            return d.support_start == 0 ? (1.0 - d.p) / d.p : 1.0 / d.p;
          },
          [](const NegativeBinomial& d) { return d.k * (1.0 - d.p) / d.p; },
          [](const Exponential& d) { return 1.0 / d.rate; },
          [](const Pareto& d) { return d.alpha * d.x_m / (d.alpha - 1.0); },
          [](const UniformContinuous& d) { return 0.5 * (d.a + d.b); },
      },
      spec.params());
}

double second_moment(const DistributionSpec& spec) {
  return std::visit(
      Overloaded{
          [](const Poisson& d) { return d.lambda + d.lambda * d.lambda; },
          [](const Geometric& d) {
            const double q = 1.0 - d.p;
            return d.support_start == 0 ? q * (1.0 + q) / (d.p * d.p) : (1.0 + q) / (d.p * d.p);
          },
          [](const NegativeBinomial& d) {
            const double m = d.k * (1.0 - d.p) / d.p;
            return m / d.p + m * m;
          },
          [](const Exponential& d) { return 2.0 / (d.rate * d.rate); },
          [](const Pareto& d) {
            if (d.alpha <= 2.0) return kInf;
            return d.alpha * d.x_m * d.x_m / (d.alpha - 2.0);
          },
          [](const UniformContinuous& d) { return (d.a * d.a + d.a * d.b + d.b * d.b) / 3.0; },
      },
      spec.params());
}

// Transforms ---------------------------------------------------------------

ComplexValue char_fn(const DistributionSpec& spec, double theta) {
  using namespace std::complex_literals;
  return std::visit(
      Overloaded{
          [&](const Poisson& d) {
            return std::exp(ComplexValue(-d.lambda * one_minus_cos(theta), d.lambda * std::sin(theta)));
          },
          [&](const Geometric& d) {
            const double q = 1.0 - d.p;
            ComplexValue value = d.p / std::exp(log_one_minus(q, theta));
            if (d.support_start == 1) value *= std::polar(1.0, theta);
            return value;
          },
          [&](const NegativeBinomial& d) {
            const double q = 1.0 - d.p;
            return std::exp(d.k * (std::log(d.p) - log_one_minus(q, theta)));
          },
          [&](const Exponential& d) { return 1.0 / ComplexValue(1.0, -theta / d.rate); },
          [&](const Pareto& d) {
            const double omega = theta * d.x_m;
            return detail::pareto_char_fn(d.alpha, omega);
          },
          [&](const UniformContinuous& d) {
            const double half = 0.5 * theta * (d.b - d.a);
            const double sinc = std::abs(half) < 1e-4 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
            return std::polar(sinc, 0.5 * theta * (d.a + d.b));
          },
      },
      spec.params());
}

namespace {

// Antiderivative of phi(u) = 1 - e^{-iu} - iu with Phi(0) = 0.
ComplexValue uniform_phi_integral(double u) {
  using namespace std::complex_literals;
  if (std::abs(u) < 1.0) {
    // -sum_{n>=2} (-i)^n u^{n+1}/(n+1)!
    ComplexValue sum = 0.0;
    ComplexValue power = -1.0;  // (-i)^2
    double term = u * u * u / 6.0;
    for (int n = 2; n < 40; ++n) {
      sum -= power * term;
      power *= -1i;
      term *= u / (n + 2);
      if (std::abs(term) < 1e-300) break;
    }
    return sum;
  }
  return u + 1i * (1.0 - std::exp(-1i * u)) - 0.5i * u * u;
}

}  // namespace

ComplexValue centered_char_remainder(const DistributionSpec& spec, double theta) {
  using namespace std::complex_literals;
  return std::visit(
      Overloaded{
          [&](const Exponential& d) {
            const double z = theta / d.rate;
            return z * z / ComplexValue(1.0, z);
          },
          [&](const Pareto& d) {
            return detail::pareto_centered_remainder(d.alpha, theta * d.x_m);
          },
          [&](const UniformContinuous& d) {
            if (theta == 0.0) return ComplexValue(0.0);
            return (uniform_phi_integral(theta * d.b) - uniform_phi_integral(theta * d.a)) /
                   (theta * (d.b - d.a));
          },
          [&](const auto&) -> ComplexValue {
            throw UnsupportedError("centered_char_remainder: " + spec.describe() + " is discrete");
          },
      },
      spec.params());
}

// Excess law ---------------------------------------------------------------

double excess_tail(const DistributionSpec& spec, double x) {
  if (x <= 0.0) return 1.0;
  const double m = mean(spec);
  if (spec.is_discrete()) {
    // int_x^inf P(X>s) ds = (j+1-x) P(X>j) + E[(X-j-1)^+], j = floor(x)
    const auto j = static_cast<std::int64_t>(std::floor(x));
    const double partial = (static_cast<double>(j) + 1.0 - x) * discrete_tail(spec, j);
    return std::min(1.0, (partial + mean_excess(spec, j + 1)) / m);
  }
  return std::visit(
      Overloaded{
          [&](const Exponential& d) { return std::exp(-d.rate * x); },
          [&](const Pareto& d) {
            if (x >= d.x_m) return std::pow(d.x_m / x, d.alpha - 1.0) / d.alpha;
            return 1.0 - x * (d.alpha - 1.0) / (d.alpha * d.x_m);
          },
          [&](const UniformContinuous& d) {
            double integral = 0.0;
            if (x <= d.a) {
              integral = (d.a - x) + 0.5 * (d.b - d.a);
            } else if (x < d.b) {
              integral = 0.5 * (d.b - x) * (d.b - x) / (d.b - d.a);
            }
            return integral / m;
          },
          [](const auto&) { return 0.0; },
      },
      spec.params());
}

double excess_tail_discrete(const DistributionSpec& spec, std::int64_t j) {
  if (!spec.is_discrete()) {
    throw UnsupportedError("excess_tail_discrete: " + spec.describe() + " is continuous");
  }
  if (j <= 0) return 1.0;
  return std::min(1.0, mean_excess(spec, j) / mean(spec));
}

// Truncation bounds ----------------------------------------------------------

double pmf_ratio_bound(const DistributionSpec& spec, std::int64_t j) {
  if (j < 0) j = 0;
  const double jd = static_cast<double>(j);
  return std::visit(
      Overloaded{
          [&](const Poisson& d) { return d.lambda / (jd + 1.0); },
          [&](const Geometric& d) {
            if (d.support_start == 1 && j == 0) return kInf;
            return 1.0 - d.p;
          },
          [&](const NegativeBinomial& d) {
            const double q = 1.0 - d.p;
            // ratio (k+i)/(i+1) q decreases in i when k >= 1 and increases to q otherwise
            return d.k >= 1.0 ? (d.k + jd) / (jd + 1.0) * q : q;
          },
          [&](const auto&) -> double {
            throw UnsupportedError("pmf_ratio_bound: " + spec.describe() + " is continuous");
          },
      },
      spec.params());
}

double tail_ratio_bound(const DistributionSpec& spec, std::int64_t j) {
  const double rho = pmf_ratio_bound(spec, j + 1);
  if (!(rho < 1.0)) return kInf;
  return pmf(spec, j + 1) / (1.0 - rho);
}

double tail_first_moment_bound(const DistributionSpec& spec, std::int64_t j) {
  const double rho = pmf_ratio_bound(spec, j + 1);
  if (!(rho < 1.0)) return kInf;
  const double first = pmf(spec, j + 1);
  const double start = static_cast<double>(j + 1);
  return first * (start / (1.0 - rho) + rho / ((1.0 - rho) * (1.0 - rho)));
}

}  // namespace ginikit
