#include "ginikit/kernels.hpp"

#include <cmath>
#include <random>

namespace ginikit {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace kernels {

namespace {

struct Neumaier {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    carry += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

ComplexValue panel_sum(const Integrand& f, double a, double b, std::span<const double> nodes,
                       std::span<const double> weights) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  ComplexValue acc = 0.0;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    acc += weights[n] * f(mid + half * nodes[n]);
  }
  return acc * half;
}

double row_partial(std::span<const double> pmf, std::size_t i) {
  double acc = 0.0;
  for (std::size_t j = 0; j < i; ++j) acc += static_cast<double>(i - j) * pmf[j];
  return pmf[i] * acc;
}

double naive_row(std::span<const double> x, std::size_t i) {
  double acc = 0.0;
  for (double v : x) acc += std::abs(x[i] - v);
  return acc;
}

double resample_gini(std::span<const double> sorted, std::uint64_t seed,
                     std::vector<std::uint32_t>& counts) {
  const std::size_t n = sorted.size();
  counts.assign(n, 0);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t draw = 0; draw < n; ++draw) ++counts[pick(rng)];
  // Sorted weighted identity: sum_{a,b} |x_a - x_b| = 2 sum_i x_i c_i (C_<i - C_>i).
  const double total_count = static_cast<double>(n);
  double below = 0.0;
  Neumaier numerator;
  Neumaier mass;
  for (std::size_t i = 0; i < n; ++i) {
    if (counts[i] == 0) continue;
    const double c = counts[i];
    numerator.add(sorted[i] * c * (2.0 * below + c - total_count));
    mass.add(sorted[i] * c);
    below += c;
  }
  if (mass.value() <= 0.0) return 0.0;
  return numerator.value() / (total_count * mass.value());
}

}  // namespace

double ordered_sum(std::span<const double> values) {
  Neumaier acc;
  for (double v : values) acc.add(v);
  return acc.value();
}

ComplexValue ordered_sum(std::span<const ComplexValue> values) {
  Neumaier re;
  Neumaier im;
  for (const ComplexValue& v : values) {
    re.add(v.real());
    im.add(v.imag());
  }
  return {re.value(), im.value()};
}

std::vector<ComplexValue> panel_sums(const Integrand& f, std::span<const double> edges,
                                     std::span<const double> nodes,
                                     std::span<const double> weights, Exec exec) {
  const std::size_t panels = edges.size() < 2 ? 0 : edges.size() - 1;
  std::vector<ComplexValue> out(panels);
  if (exec == Exec::Parallel) {
    const auto count = static_cast<std::int64_t>(panels);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
      out[i] = panel_sum(f, edges[i], edges[i + 1], nodes, weights);
    }
  } else {
    for (std::size_t i = 0; i < panels; ++i) {
      out[i] = panel_sum(f, edges[i], edges[i + 1], nodes, weights);
    }
  }
  return out;
}

std::vector<double> pairwise_rows(std::span<const double> pmf, Exec exec) {
  std::vector<double> rows(pmf.size());
  if (exec == Exec::Parallel) {
    const auto count = static_cast<std::int64_t>(pmf.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < count; ++i) rows[i] = row_partial(pmf, i);
  } else {
    for (std::size_t i = 0; i < pmf.size(); ++i) rows[i] = row_partial(pmf, i);
  }
  return rows;
}

double pairwise_abs_diff_naive(std::span<const double> values, Exec exec) {
  std::vector<double> rows(values.size());
  if (exec == Exec::Parallel) {
    const auto count = static_cast<std::int64_t>(values.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) rows[i] = naive_row(values, i);
  } else {
    for (std::size_t i = 0; i < values.size(); ++i) rows[i] = naive_row(values, i);
  }
  return ordered_sum(rows);
}

std::vector<double> bootstrap_sorted_gini(std::span<const double> sorted, int resamples,
                                          std::uint64_t seed, Exec exec) {
  std::vector<double> out(resamples > 0 ? resamples : 0);
  if (sorted.empty()) return out;
  if (exec == Exec::Parallel) {
#pragma omp parallel
    {
      std::vector<std::uint32_t> counts;
#pragma omp for schedule(static)
      for (int b = 0; b < resamples; ++b) {
        out[b] = resample_gini(sorted, mix_seed(seed, b), counts);
      }
    }
  } else {
    std::vector<std::uint32_t> counts;
    for (int b = 0; b < resamples; ++b) out[b] = resample_gini(sorted, mix_seed(seed, b), counts);
  }
  return out;
}

}  // namespace kernels

}  // namespace ginikit
