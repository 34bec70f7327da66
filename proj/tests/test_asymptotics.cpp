#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ginikit/asymptotics.hpp"
#include "ginikit/error.hpp"

using namespace ginikit;

namespace {

// c written directly in terms of p: 2 log p - (2-p)/(1-p) log(p (2-p)).
double slope_p_form(double p) {
  return 2.0 * std::log(p) - (2.0 - p) / (1.0 - p) * std::log(p * (2.0 - p));
}

}  // namespace

TEST_CASE("parameter maps") {
  CHECK(lambda_from_p(0.5) == doctest::Approx(1.0));
  CHECK(p_from_lambda(1.0) == doctest::Approx(0.5));
  for (double p : {0.008, 0.3, 0.97}) CHECK(p_from_lambda(lambda_from_p(p)) == doctest::Approx(p));
  CHECK_THROWS_AS(lambda_from_p(1.0), DomainError);
}

TEST_CASE("small-k slope") {
  CHECK(small_k_slope(0.008) == doctest::Approx(-1.34490).epsilon(1e-5));
  CHECK(small_k_slope(0.06) == doctest::Approx(-1.18810).epsilon(1e-5));
  CHECK(std::abs(small_k_slope(0.9999)) < 1e-2);
  CHECK(small_k_slope(0.9999) < 0.0);
  for (double p : {0.001, 0.008, 0.06, 0.3, 0.5, 0.9, 0.99}) {
    CAPTURE(p);
    CHECK(small_k_slope(p) < 0.0);
    CHECK(small_k_slope(p) == doctest::Approx(slope_p_form(p)).epsilon(1e-12));
  }
  const auto c = asymptotic_constants(0.5);
  CHECK(c.lambda_ == doctest::Approx(1.0));
  CHECK(c.large_k_limit == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)));
  CHECK(c.sigma == doctest::Approx(std::sqrt(2.0)));
  CHECK(c.small_k_slope_c == small_k_slope(0.5));
}

TEST_CASE("small-k formula") {
  CHECK(std::abs(gini_small_k(0.06, 0.008).value - 0.9193061) < 1e-4);
  CHECK(std::abs(gini_small_k(0.2, 0.06).value - 0.7623808) < 1e-4);
  CHECK(gini_small_k(1e-12, 0.5).value == doctest::Approx(1.0));
  CHECK(gini_small_k(0.06, 0.008).method == GiniMethod::AsymptoticSmallK);
  const auto far = gini_small_k(50.0, 0.5);
  CHECK(far.out_of_domain);
  CHECK(far.value < 0.0);
  CHECK_FALSE(gini_small_k(0.01, 0.5).out_of_domain);
}

TEST_CASE("large-k formula") {
  const double pi = std::numbers::pi;
  CHECK(gini_large_k(pi, 1.0).value == doctest::Approx(std::sqrt(2.0) / pi).epsilon(1e-14));
  CHECK(gini_large_k(1e12, 1.0).value < 1e-6);
  CHECK(gini_large_k(4.0, 3.0).value == doctest::Approx(std::sqrt(4.0 / pi) / 2.0));
  CHECK(gini_large_k(4.0, 3.0).method == GiniMethod::AsymptoticLargeK);
}

TEST_CASE("appendix coefficients") {
  CHECK(appendix_c_j(1, 1.0) == doctest::Approx(0.5));
  CHECK(appendix_c_j(3, 1.0) == doctest::Approx(1.0 / 24.0));
  // 1/2 - (ln 2 - 1/2)
  CHECK(appendix_d_star_j(1, 1.0) == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-12));
  for (double lambda : {0.1, 1.0, 10.0}) {
    for (std::int64_t j : {1, 2, 5, 40}) {
      CHECK(appendix_c_j(j, lambda) > 0.0);
      const double d = appendix_d_star_j(j, lambda);
      CHECK(d >= 0.0);
      CHECK(d <= 1.0);
    }
  }
  CHECK_THROWS_AS(appendix_c_j(0, 1.0), DomainError);
  CHECK_THROWS_AS(appendix_d_star_j(0, 1.0), DomainError);
}

TEST_CASE("slope identity from the series") {
  for (double lambda : {0.1, 1.0, 10.0}) {
    CAPTURE(lambda);
    CHECK(std::abs(small_k_slope_from_series(lambda) - small_k_slope(p_from_lambda(lambda))) < 1e-8);
  }
}

TEST_CASE("small-k pmf approximation") {
  for (double lambda : {0.1, 1.0, 10.0}) {
    for (std::int64_t j : {0, 1, 2}) {
      const double k = 1e-3;
      const auto c = small_k_pmf_check(j, k, lambda);
      CAPTURE(lambda);
      CAPTURE(j);
      CHECK(std::abs(c.exact - c.approx) / c.approx < 0.01);
    }
  }
  const auto at1 = small_k_pmf_check(1, 1e-3, 1.0);
  CHECK(std::abs(at1.exact - 1e-3 / 2.0) / 1e-3 < 0.01);
  const auto at0 = small_k_pmf_check(0, 1e-3, 1.0);
  CHECK(std::abs(at0.exact - (1.0 - 1e-3 * std::log(2.0))) / 1e-3 < 0.01);
  const auto tiny = small_k_pmf_check(0, 1e-12, 1.0);
  CHECK(tiny.exact == doctest::Approx(1.0));
  CHECK(tiny.approx == doctest::Approx(1.0));
}

TEST_CASE("normal limit of the centred negative binomial") {
  const auto s = clt_normalization_check(1e4, 1.0, 100000, 5);
  CHECK(s.n == 100000);
  CHECK(std::abs(s.mean) < 0.02);
  CHECK(std::abs(s.variance - 1.0) < 0.03);
  CHECK(s.ks < 0.01);
  const auto serial = clt_normalization_check(1e4, 1.0, 20000, 6, Exec::Serial);
  const auto parallel = clt_normalization_check(1e4, 1.0, 20000, 6, Exec::Parallel);
  CHECK(serial.mean == parallel.mean);
  CHECK(serial.ks == parallel.ks);
  CHECK_THROWS_AS(clt_normalization_check(1e4, 1.0, 0, 1), DomainError);
  CHECK_THROWS_AS(clt_normalization_check(10.0, 1.0, 100, 1), DomainError);
}
