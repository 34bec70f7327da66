#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ginikit/gini.hpp"

namespace ginikit {

struct SampleSet {
  std::vector<double> values;
  /// File path or "synthetic:<seed>".
  std::string source;
};

enum class EmpiricalVariant {
  /// sum |x_i - x_j| / (2 n^2 mean): the population functional of the sample.
  PlugIn,
  /// Same with n(n-1) in place of n^2.
  Unbiased,
};

struct EmpiricalOptions {
  EmpiricalVariant variant = EmpiricalVariant::PlugIn;
  int bootstrap_resamples = 200;
  std::uint64_t seed = 0;
  Exec exec = Exec::Parallel;
};

/// Gini of the sample with a bootstrap standard error in mc_standard_error.
GiniResult empirical_gini(const SampleSet& s, const EmpiricalOptions& options = {});

/// Plug-in Gini of an ascending sample via sum (2i - n - 1) x_(i) / (n^2 mean).
double gini_sorted(std::span<const double> sorted);

/// Plug-in Gini by the O(n^2) double loop.
double gini_naive(std::span<const double> values, Exec exec = Exec::Parallel);

enum class SampleFormat { Csv, Lines };

/// Reads nonnegative values. CSV needs a header row; `column` is a header
/// name or a 0-based index and defaults to the first column. Errors name the
/// offending line.
SampleSet load_samples(const std::string& path, SampleFormat format,
                       const std::optional<std::string>& column = std::nullopt);

}  // namespace ginikit
