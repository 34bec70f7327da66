#pragma once

#include "ginikit/distributions.hpp"

namespace ginikit::detail {

// Unit-scale Pareto (x_m = 1) at angular argument omega = theta * x_m.

/// E[exp(i omega Y)] for Y ~ Pareto(alpha, 1).
ComplexValue pareto_char_fn(double alpha, double omega);

/// E[1 - exp(-i omega Y) - i omega Y] for Y ~ Pareto(alpha, 1).
ComplexValue pareto_centered_remainder(double alpha, double omega);

}  // namespace ginikit::detail
