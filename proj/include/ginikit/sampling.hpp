#pragma once

#include <cstdint>
#include <vector>

#include "ginikit/distributions.hpp"
#include "ginikit/kernels.hpp"

namespace ginikit {

/// Draws per independently seeded block; the output depends only on
/// (spec, seed, n), never on the thread count.
inline constexpr std::size_t kSampleBlock = 65536;

/// n draws from `spec`. The negative binomial is drawn as a Poisson with a
/// Gamma(k, p/(1-p)) rate, which handles real k directly.
std::vector<double> sample(const DistributionSpec& spec, std::uint64_t seed, std::size_t n,
                           Exec exec = Exec::Parallel);

}  // namespace ginikit
