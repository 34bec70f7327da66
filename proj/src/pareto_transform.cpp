#include "pareto_transform.hpp"

#include <array>
#include <cmath>
#include <complex>

#include "ginikit/quadrature.hpp"

namespace ginikit::detail {

namespace {

using namespace std::complex_literals;

// int_omega^inf u^(-alpha-1) e^(-iu) du for omega >= 1. The contour is turned
// onto u = omega - i s, where the integrand decays like e^(-s) and has no
// oscillation; composite Gauss-Legendre then converges fast.
ComplexValue upper_integral(double alpha, double omega) {
  static const GaussLegendreRule& rule = gauss_legendre(16);
  static constexpr std::array<double, 7> kEdges{0.0, 1.0, 3.0, 7.0, 15.0, 31.0, 63.0};
  ComplexValue sum = 0.0;
  for (std::size_t panel = 0; panel + 1 < kEdges.size(); ++panel) {
    const double half = 0.5 * (kEdges[panel + 1] - kEdges[panel]);
    const double mid = 0.5 * (kEdges[panel + 1] + kEdges[panel]);
    for (std::size_t n = 0; n < rule.nodes.size(); ++n) {
      const double s = mid + half * rule.nodes[n];
      // (omega - i s)^(-alpha-1) e^(-s)
      const double log_modulus = 0.5 * std::log(omega * omega + s * s);
      const double arg = -std::atan2(s, omega);
      sum += rule.weights[n] * half *
             std::polar(std::exp(-(alpha + 1.0) * log_modulus - s), -(alpha + 1.0) * arg);
    }
  }
  return -1i * std::polar(1.0, -omega) * sum;
}

// -sum_{n>=2} ((-i)^n / n!) * int_omega^1 u^(n-alpha-1) du, for 0 < omega < 1.
ComplexValue lower_series(double alpha, double omega) {
  const double log_omega = std::log(omega);
  ComplexValue sum = 0.0;
  ComplexValue power = -1.0;  // (-i)^2
  double inv_factorial = 0.5;
  for (int n = 2; n < 60; ++n) {
    const double d = n - alpha;
    const double x = d * log_omega;
    // (1 - omega^d)/d, with the d -> 0 limit -log(omega)
    const double piece = std::abs(x) < 1e-300 ? -log_omega : -std::expm1(x) / d;
    const ComplexValue term = power * inv_factorial * piece;
    sum -= term;
    if (n > 4 && std::abs(term) < 1e-18 * std::abs(sum)) break;
    power *= -1i;
    inv_factorial /= n + 1;
  }
  return sum;
}

// p^(-omega) together with 1 - p^(-omega) - i omega m, for omega > 0.
struct Transform {
  ComplexValue char_fn_negative;
  ComplexValue remainder;
};

Transform positive_side(double alpha, double omega) {
  const double mean = alpha / (alpha - 1.0);
  const double scale = alpha * std::pow(omega, alpha);
  if (omega >= 1.0) {
    const ComplexValue value = scale * upper_integral(alpha, omega);
    return {value, 1.0 - value - 1i * omega * mean};
  }
  const ComplexValue at_one = 1.0 / alpha - 1i / (alpha - 1.0) - upper_integral(alpha, 1.0);
  const ComplexValue remainder = scale * (lower_series(alpha, omega) + at_one);
  return {1.0 - 1i * omega * mean - remainder, remainder};
}

}  // namespace

ComplexValue pareto_char_fn(double alpha, double omega) {
  if (omega == 0.0) return 1.0;
  if (omega > 0.0) return std::conj(positive_side(alpha, omega).char_fn_negative);
  return positive_side(alpha, -omega).char_fn_negative;
}

ComplexValue pareto_centered_remainder(double alpha, double omega) {
  if (omega == 0.0) return 0.0;
  if (omega > 0.0) return positive_side(alpha, omega).remainder;
  return std::conj(positive_side(alpha, -omega).remainder);
}

}  // namespace ginikit::detail
