#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "ginikit/distributions.hpp"
#include "ginikit/error.hpp"
#include "ginikit/sampling.hpp"
#include "oracles.hpp"

using namespace ginikit;
using D = DistributionSpec;

namespace {

std::vector<D> discrete_specs() {
  return {D::poisson(0.5), D::poisson(1.0), D::poisson(5.0), D::geometric(0.1),
          D::geometric(0.5), D::geometric(0.9, 1), D::negative_binomial(0.06, 0.1),
          D::negative_binomial(0.5, 0.5), D::negative_binomial(2.0, 0.9),
          D::negative_binomial(10.0, 0.1)};
}

std::vector<D> all_specs() {
  auto specs = discrete_specs();
  specs.push_back(D::exponential(1.0));
  specs.push_back(D::exponential(3.0));
  specs.push_back(D::pareto(1.5));
  specs.push_back(D::pareto(3.0, 2.0));
  specs.push_back(D::uniform(0.0, 1.0));
  specs.push_back(D::uniform(1.0, 3.0));
  return specs;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(D::poisson(0.0), DomainError);
  CHECK_THROWS_AS(D::poisson(-1.0), DomainError);
  CHECK_THROWS_AS(D::geometric(0.0), DomainError);
  CHECK_THROWS_AS(D::geometric(1.0), DomainError);
  CHECK_THROWS_AS(D::geometric(0.5, 2), DomainError);
  CHECK_THROWS_AS(D::negative_binomial(0.0, 0.5), DomainError);
  CHECK_THROWS_AS(D::negative_binomial(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(D::exponential(0.0), DomainError);
  CHECK_THROWS_AS(D::pareto(1.0), DomainError);
  CHECK_THROWS_AS(D::pareto(2.0, 0.0), DomainError);
  CHECK_THROWS_AS(D::uniform(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(D::uniform(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(D::poisson(std::nan("")), DomainError);
  for (const auto& s : all_specs()) CHECK(mean(s) > 0.0);
}

TEST_CASE("pmf examples") {
  CHECK(pmf(D::poisson(1.0), 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(pmf(D::negative_binomial(1.0, 0.5), 2) == doctest::Approx(0.125).epsilon(1e-14));
  // Gamma(1.5)/(Gamma(2) Gamma(0.5)) 0.5^0.5 0.5
  CHECK(pmf(D::negative_binomial(0.5, 0.5), 1) ==
        doctest::Approx(0.5 * std::sqrt(0.5) * 0.5).epsilon(1e-13));
  CHECK_THROWS_AS(pmf(D::exponential(1.0), 0), UnsupportedError);
  CHECK(pmf(D::poisson(1.0), -1) == 0.0);
  CHECK(pmf(D::geometric(0.5, 1), 0) == 0.0);
}

TEST_CASE("pmf matches the recurrence oracle, including Table 1 regimes") {
  struct Case {
    double k, p;
  };
  for (const Case c : {Case{0.06, 0.008}, Case{0.2, 0.06}, Case{2.7, 0.2}, Case{1e3, 0.5}}) {
    const auto ref = oracle::nb_pmf(c.k, c.p);
    const auto spec = D::negative_binomial(c.k, c.p);
    for (std::size_t j : {0UL, 1UL, 7UL, 100UL, 2000UL}) {
      if (j >= ref.size() || ref[j] < 1e-250L) continue;
      CAPTURE(c.k);
      CAPTURE(j);
      CHECK(pmf(spec, static_cast<std::int64_t>(j)) ==
            doctest::Approx(static_cast<double>(ref[j])).epsilon(1e-10));
    }
  }
  const auto ref = oracle::poisson_pmf(5.0L);
  for (std::size_t j = 0; j < 30; ++j) {
    CHECK(pmf(D::poisson(5.0), static_cast<std::int64_t>(j)) ==
          doctest::Approx(static_cast<double>(ref[j])).epsilon(1e-12));
  }
}

TEST_CASE("compound sampler frequency at j=1 matches the gamma-ratio pmf") {
  const auto spec = D::negative_binomial(0.5, 0.5);
  const std::size_t n = 1000000;
  const auto xs = sample(spec, 7, n);
  const double freq = static_cast<double>(std::count(xs.begin(), xs.end(), 1.0)) / n;
  const double p1 = pmf(spec, 1);
  CHECK(std::abs(freq - p1) < 3.0 * std::sqrt(p1 * (1.0 - p1) / n));
}

TEST_CASE("pdf examples and normalisation") {
  CHECK(pdf(D::pareto(2.0, 1.0), 1.0) == doctest::Approx(2.0));
  CHECK(pdf(D::uniform(0.0, 2.0), 1.0) == doctest::Approx(0.5));
  CHECK(pdf(D::exponential(1.0), 0.0) == doctest::Approx(1.0));
  CHECK(pdf(D::pareto(2.0, 1.0), 0.5) == 0.0);
  CHECK(pdf(D::uniform(1.0, 3.0), 3.5) == 0.0);
  CHECK_THROWS_AS(pdf(D::poisson(1.0), 1.0), UnsupportedError);

  const auto total = [](const D& s, double lo, double hi) {
    return static_cast<double>(
        oracle::simpson([&](long double x) { return pdf(s, static_cast<double>(x)); }, lo, hi,
                        1e-12L));
  };
  CHECK(total(D::exponential(2.0), 0.0, 40.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(total(D::uniform(1.0, 3.0), 1.0, 3.0) == doctest::Approx(1.0).epsilon(1e-12));
  // Pareto(3, 1) beyond 1e3 carries 1e-9 of mass.
  CHECK(total(D::pareto(3.0, 1.0), 1.0, 1e3) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("tail examples") {
  CHECK(tail(D::exponential(1.0), std::log(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
  for (double p : {0.1, 0.5, 0.9}) {
    for (int j : {0, 1, 5, 20}) {
      CHECK(tail(D::geometric(p), j) == doctest::Approx(std::pow(1.0 - p, j + 1)).epsilon(1e-13));
    }
  }
  CHECK(tail(D::pareto(2.0, 1.0), 2.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(tail(D::uniform(1.0, 3.0), 2.5) == doctest::Approx(0.25).epsilon(1e-14));
  for (const auto& s : all_specs()) {
    CHECK(tail(s, -1e-9) == doctest::Approx(1.0));
    double prev = 1.0;
    for (double x = 0.0; x < 50.0; x += 0.37) {
      const double t = tail(s, x);
      CHECK(t <= prev + 1e-15);
      CHECK(t >= 0.0);
      prev = t;
    }
  }
}

TEST_CASE("pmf sums plus tail give one") {
  for (const auto& s : discrete_specs()) {
    CAPTURE(s.describe());
    double cum = 0.0;
    double c = 0.0;
    for (std::int64_t j = 0; j <= 400; ++j) {
      // Neumaier keeps the running sum from hiding the check.
      const double term = pmf(s, j);
      const double t = cum + term;
      c += std::abs(cum) >= std::abs(term) ? (cum - t) + term : (term - t) + cum;
      cum = t;
      if (j % 37 == 0 || j == 400) CHECK(std::abs(cum + c + tail(s, j) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("mean examples") {
  CHECK(mean(D::negative_binomial(2.0, 0.5)) == doctest::Approx(2.0));
  CHECK(mean(D::pareto(2.0, 1.0)) == doctest::Approx(2.0));
  CHECK(mean(D::uniform(1.0, 3.0)) == doctest::Approx(2.0));
  CHECK(mean(D::geometric(0.25, 1)) == doctest::Approx(4.0));
  CHECK(mean(D::geometric(0.25, 0)) == doctest::Approx(3.0));
  CHECK(std::isinf(second_moment(D::pareto(2.0))));
  CHECK(second_moment(D::pareto(3.0)) == doctest::Approx(3.0));
}

TEST_CASE("characteristic function") {
  for (const auto& s : all_specs()) {
    const auto one = char_fn(s, 0.0);
    CHECK(one.real() == doctest::Approx(1.0));
    CHECK(std::abs(one.imag()) < 1e-15);
    for (double th : {-7.5, -2.0, -0.3, 0.01, 0.7, 3.0, 11.0}) {
      const auto a = char_fn(s, th);
      const auto b = char_fn(s, -th);
      CHECK(std::abs(a) <= 1.0 + 1e-12);
      CHECK(std::abs(a - std::conj(b)) < 1e-12);
    }
  }
  const auto pi = std::numbers::pi;
  const auto poisson = char_fn(D::poisson(1.0), pi);
  CHECK(poisson.real() == doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
  CHECK(std::abs(poisson.imag()) < 1e-15);
  const auto nb = char_fn(D::negative_binomial(1.0, 0.5), pi);
  CHECK(nb.real() == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(std::abs(nb.imag()) < 1e-15);
}

TEST_CASE("Pareto characteristic function against a direct transform of the density") {
  // E[cos(w X)] and E[sin(w X)] by Simpson over [x_m, U] with a tiny tail.
  const auto spec = D::pareto(3.0, 1.0);
  for (double w : {0.2, 1.0, 4.0}) {
    const double upper = 2000.0;
    const long double re = oracle::simpson(
        [&](long double x) { return std::cos(w * x) * 3.0L / (x * x * x * x); }, 1, upper, 1e-15L);
    const long double im = oracle::simpson(
        [&](long double x) { return std::sin(w * x) * 3.0L / (x * x * x * x); }, 1, upper, 1e-15L);
    const auto v = char_fn(spec, w);
    CAPTURE(w);
    CHECK(std::abs(v.real() - static_cast<double>(re)) < 1e-9);
    CHECK(std::abs(v.imag() - static_cast<double>(im)) < 1e-9);
  }
}

TEST_CASE("centred remainder equals its definition away from zero") {
  for (const auto& s : {D::exponential(1.0), D::uniform(1.0, 3.0), D::pareto(1.5), D::pareto(3.0)}) {
    for (double th : {-3.0, 0.5, 2.0}) {
      const ComplexValue direct =
          1.0 - char_fn(s, -th) - ComplexValue(0.0, th * mean(s));
      CHECK(std::abs(centered_char_remainder(s, th) - direct) < 1e-10);
    }
  }
  CHECK_THROWS_AS(centered_char_remainder(D::poisson(1.0), 1.0), UnsupportedError);
}

TEST_CASE("excess tail") {
  for (double rate : {0.5, 1.0, 4.0}) {
    for (double x : {0.0, 0.3, 2.0, 9.0}) {
      CHECK(excess_tail(D::exponential(rate), x) ==
            doctest::Approx(std::exp(-rate * x)).epsilon(1e-13));
      CHECK(excess_tail(D::exponential(rate), x) ==
            doctest::Approx(tail(D::exponential(rate), x)).epsilon(1e-13));
    }
  }
  for (double alpha : {1.5, 2.0, 3.0}) {
    for (double x : {2.0, 3.0, 10.0}) {
      CHECK(excess_tail(D::pareto(alpha, 2.0), x) ==
            doctest::Approx(std::pow(2.0 / x, alpha - 1.0) / alpha).epsilon(1e-13));
    }
    CHECK(excess_tail(D::pareto(alpha, 2.0), 0.0) == doctest::Approx(1.0));
  }
  for (double p : {0.1, 0.5, 0.9}) {
    for (int j : {0, 1, 4, 30}) {
      CHECK(excess_tail_discrete(D::geometric(p), j) ==
            doctest::Approx(std::pow(1.0 - p, j)).epsilon(1e-12));
    }
  }
  for (const auto& s : all_specs()) {
    CHECK(excess_tail(s, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    double prev = 1.0;
    for (double x = 0.0; x < 30.0; x += 0.41) {
      const double v = excess_tail(s, x);
      CHECK(v <= prev + 1e-14);
      CHECK(v >= 0.0);
      prev = v;
    }
  }
}

TEST_CASE("excess tail against the integral definition") {
  // (1/E X) int_x^inf P(X > s) ds with Simpson.
  for (const auto& s : {D::uniform(1.0, 3.0), D::pareto(3.0, 1.0)}) {
    for (double x : {0.5, 1.5, 2.5}) {
      const long double upper = 3000;
      const long double integral = oracle::simpson(
          [&](long double t) { return tail(s, static_cast<double>(t)); }, x, upper, 1e-13L);
      CHECK(excess_tail(s, x) == doctest::Approx(static_cast<double>(integral) / mean(s)).epsilon(1e-6));
    }
  }
}

TEST_CASE("discrete excess identity") {
  for (const auto& s : discrete_specs()) {
    CAPTURE(s.describe());
    for (std::int64_t j : {0, 1, 2, 5, 17, 60}) {
      const double diff = excess_tail_discrete(s, j) - excess_tail_discrete(s, j + 1);
      CHECK(std::abs(diff - tail(s, static_cast<double>(j)) / mean(s)) < 1e-12);
    }
    CHECK(excess_tail_discrete(s, 0) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(excess_tail_discrete(D::exponential(1.0), 0), UnsupportedError);
}

TEST_CASE("NB(1, p) is the geometric law") {
  for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const auto nb = D::negative_binomial(1.0, p);
    const auto g = D::geometric(p);
    for (std::int64_t j = 0; j < 40; ++j) {
      CHECK(std::abs(pmf(nb, j) - pmf(g, j)) < 1e-12);
      CHECK(std::abs(tail(nb, j) - tail(g, j)) < 1e-12);
    }
    for (double th : {0.1, 1.0, 3.0, 6.0}) CHECK(std::abs(char_fn(nb, th) - char_fn(g, th)) < 1e-12);
  }
}

TEST_CASE("truncation bounds dominate the true tail") {
  for (const auto& s : discrete_specs()) {
    CAPTURE(s.describe());
    for (std::int64_t j : {0, 3, 10, 50, 200}) {
      const double bound = tail_ratio_bound(s, j);
      if (std::isfinite(bound)) CHECK(tail(s, static_cast<double>(j)) <= bound * (1 + 1e-12) + 1e-300);
    }
  }
}

TEST_CASE("sampling is reproducible and thread independent") {
  for (const auto& s : {D::negative_binomial(0.3, 0.2), D::pareto(1.5), D::uniform(0.0, 1.0),
                        D::poisson(3.0), D::geometric(0.4, 1), D::exponential(2.0)}) {
    const auto a = sample(s, 42, 200000, Exec::Parallel);
    const auto b = sample(s, 42, 200000, Exec::Serial);
    const auto c = sample(s, 43, 200000, Exec::Parallel);
    CHECK(a == b);
    CHECK(a != c);
    CHECK(std::all_of(a.begin(), a.end(), [](double x) { return x >= 0.0 && std::isfinite(x); }));
  }
  CHECK_THROWS_AS(sample(D::poisson(1.0), 1, 0), DomainError);
}

TEST_CASE("sample means") {
  const std::size_t n = 1000000;
  const auto spec = D::negative_binomial(2.0, 0.5);
  const auto xs = sample(spec, 11, n);
  double m = 0.0;
  for (double x : xs) m += x;
  m /= n;
  const double sd = std::sqrt(2.0 * 0.5 / 0.25);  // k(1-p)/p^2
  CHECK(std::abs(m - 2.0) < 3.0 * sd / std::sqrt(static_cast<double>(n)));

  const auto small_k = D::negative_binomial(0.3, 0.2);
  const auto ys = sample(small_k, 12, n);
  const double f0 = static_cast<double>(std::count(ys.begin(), ys.end(), 0.0)) / n;
  const double p0 = pmf(small_k, 0);
  CHECK(std::abs(f0 - p0) < 3.0 * std::sqrt(p0 * (1.0 - p0) / n));

  for (const auto& s : {D::exponential(2.0), D::uniform(1.0, 3.0), D::pareto(3.0, 2.0),
                        D::poisson(4.0), D::geometric(0.3, 1)}) {
    const auto zs = sample(s, 13, n);
    double mu = 0.0;
    double m2 = 0.0;
    for (double z : zs) {
      mu += z;
      m2 += z * z;
    }
    mu /= n;
    const double var = m2 / n - mu * mu;
    CAPTURE(s.describe());
    CHECK(std::abs(mu - mean(s)) < 4.0 * std::sqrt(var / n));
  }
}

TEST_CASE("compound sampler passes a chi-square goodness-of-fit test") {
  const std::size_t n = 100000;
  std::uint64_t seed = 100;
  for (double k : {0.5, 1.0, 2.7}) {
    for (double p : {0.2, 0.5, 0.8}) {
      const auto spec = D::negative_binomial(k, p);
      const auto xs = sample(spec, seed++, n);
      std::map<std::int64_t, double> observed;
      for (double x : xs) observed[static_cast<std::int64_t>(x)] += 1.0;
      // Cells j = 0..J-1 with expected count >= 5, plus a pooled tail cell.
      double chi2 = 0.0;
      int cells = 0;
      double expected_rest = static_cast<double>(n);
      double observed_rest = static_cast<double>(n);
      for (std::int64_t j = 0;; ++j) {
        const double e = n * pmf(spec, j);
        if (e < 5.0 || expected_rest - e < 5.0) break;
        const double o = observed.count(j) ? observed[j] : 0.0;
        chi2 += (o - e) * (o - e) / e;
        expected_rest -= e;
        observed_rest -= o;
        ++cells;
      }
      chi2 += (observed_rest - expected_rest) * (observed_rest - expected_rest) / expected_rest;
      ++cells;
      const double dof = cells - 1;
      const double p_value = boost::math::gamma_q(dof / 2.0, chi2 / 2.0);
      CAPTURE(k);
      CAPTURE(p);
      CAPTURE(chi2);
      CHECK(p_value > 0.001);
    }
  }
}
