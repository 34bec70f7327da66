#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ginikit/distributions.hpp"

namespace ginikit {

/// Execution strategy for the data-parallel kernels. Both strategies reduce
/// per-chunk partials in a fixed order, so their results are bitwise equal.
enum class Exec { Serial, Parallel };

using Integrand = std::function<ComplexValue(double)>;

namespace kernels {

/// Gauss-Legendre sum over every panel [edges[i], edges[i+1]], one partial
/// per panel. `nodes` and `weights` are the rule on [-1, 1].
std::vector<ComplexValue> panel_sums(const Integrand& f, std::span<const double> edges,
                                     std::span<const double> nodes,
                                     std::span<const double> weights, Exec exec);

/// Row partials r_i = pmf_i * sum_{j<i} (i - j) pmf_j, so that
/// sum_i sum_j |i - j| pmf_i pmf_j = 2 * sum_i r_i.
std::vector<double> pairwise_rows(std::span<const double> pmf, Exec exec);

/// Naive O(n^2) sum_i sum_j |x_i - x_j| with per-row partials.
double pairwise_abs_diff_naive(std::span<const double> values, Exec exec);

/// Gini of `resamples` bootstrap draws from a sorted sample. Resample b uses
/// a generator seeded from (seed, b) only.
std::vector<double> bootstrap_sorted_gini(std::span<const double> sorted, int resamples,
                                          std::uint64_t seed, Exec exec);

/// Compensated (Neumaier) sum in index order.
double ordered_sum(std::span<const double> values);
ComplexValue ordered_sum(std::span<const ComplexValue> values);

}  // namespace kernels

/// SplitMix64 finalizer used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace ginikit
