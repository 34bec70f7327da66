#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ginikit/kernels.hpp"
#include "ginikit/quadrature.hpp"

using namespace ginikit;

TEST_CASE("panel sums: serial equals parallel bit for bit") {
  const auto& rule = gauss_legendre(16);
  std::vector<double> edges;
  for (int i = 0; i <= 1000; ++i) edges.push_back(0.01 * i);
  const Integrand f = [](double t) { return ComplexValue(std::sin(t) / (1.0 + t), std::cos(3 * t)); };
  const auto a = kernels::panel_sums(f, edges, rule.nodes, rule.weights, Exec::Serial);
  const auto b = kernels::panel_sums(f, edges, rule.nodes, rule.weights, Exec::Parallel);
  REQUIRE(a.size() == 1000);
  CHECK(a == b);
  // Panel i holds the integral over [edges[i], edges[i+1]].
  const ComplexValue total = kernels::ordered_sum(a);
  CHECK(total.imag() == doctest::Approx(std::sin(30.0) / 3.0).epsilon(1e-12));
}

TEST_CASE("pairwise rows") {
  std::vector<double> pmf{0.1, 0.2, 0.3, 0.4};
  const auto serial = kernels::pairwise_rows(pmf, Exec::Serial);
  CHECK(serial == kernels::pairwise_rows(pmf, Exec::Parallel));
  double brute = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    for (std::size_t j = 0; j < pmf.size(); ++j) {
      brute += std::abs(static_cast<double>(i) - static_cast<double>(j)) * pmf[i] * pmf[j];
    }
  }
  CHECK(2.0 * kernels::ordered_sum(serial) == doctest::Approx(brute).epsilon(1e-15));

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> big(50000);
  for (auto& x : big) x = u(rng);
  CHECK(kernels::pairwise_rows(big, Exec::Serial) == kernels::pairwise_rows(big, Exec::Parallel));
}

TEST_CASE("naive absolute differences") {
  std::vector<double> v{3.0, 1.0, 4.0, 1.0, 5.0};
  // 2+1+2+2 + 3+0+4 + 3+1 + 4 = 22 over i < j, counted in both orders
  CHECK(kernels::pairwise_abs_diff_naive(v, Exec::Serial) == 44.0);
  CHECK(kernels::pairwise_abs_diff_naive(v, Exec::Parallel) == 44.0);
}

TEST_CASE("bootstrap replicas depend only on the seed") {
  std::vector<double> sorted(3000);
  for (std::size_t i = 0; i < sorted.size(); ++i) sorted[i] = std::pow(static_cast<double>(i), 1.5);
  const auto a = kernels::bootstrap_sorted_gini(sorted, 64, 5, Exec::Serial);
  const auto b = kernels::bootstrap_sorted_gini(sorted, 64, 5, Exec::Parallel);
  const auto c = kernels::bootstrap_sorted_gini(sorted, 64, 6, Exec::Parallel);
  CHECK(a == b);
  CHECK(a != c);
  for (double g : a) {
    CHECK(g > 0.0);
    CHECK(g < 1.0);
  }
}

TEST_CASE("ordered sums are compensated") {
  std::vector<double> v{1e16, 1.0, -1e16, 1.0};
  CHECK(kernels::ordered_sum(v) == 2.0);
  std::vector<ComplexValue> w{{1e16, 1.0}, {1.0, -1e16}, {-1e16, 1e16}, {1.0, 1.0}};
  CHECK(kernels::ordered_sum(w) == ComplexValue(2.0, 2.0));
}

TEST_CASE("seed mixing") {
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  CHECK(mix_seed(7, 3) == mix_seed(7, 3));
}
