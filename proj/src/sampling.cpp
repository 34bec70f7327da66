#include "ginikit/sampling.hpp"

#include <cmath>
#include <random>
#include <variant>

#include "ginikit/error.hpp"

namespace ginikit {

namespace {

using Engine = std::mt19937_64;

double uniform_open(Engine& rng) {
  // (0, 1): never returns 0, so logs and negative powers are safe
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Marsaglia-Tsang for shape >= 1.
double gamma_large(Engine& rng, double shape) {
  std::normal_distribution<double> normal;
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x;
    double v;
    do {
      x = normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open(rng);
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// log of a unit-scale Gamma(shape) draw. For shape < 1 the draw is boosted:
// G(a) = G(a+1) * U^(1/a), kept in log space because U^(1/a) underflows
// for the tiny shapes of the superspreading regime.
double log_gamma_draw(Engine& rng, double shape) {
  if (shape >= 1.0) return std::log(gamma_large(rng, shape));
  return std::log(gamma_large(rng, shape + 1.0)) + std::log(uniform_open(rng)) / shape;
}

double poisson_draw(Engine& rng, double mean) {
  if (!(mean > 0.0)) return 0.0;
  std::poisson_distribution<long long> poisson(mean);
  return static_cast<double>(poisson(rng));
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void fill_block(const DistributionSpec& spec, Engine& rng, double* out, std::size_t count) {
  std::visit(
      Overloaded{
          [&](const Poisson& d) {
            std::poisson_distribution<long long> poisson(d.lambda);
            for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<double>(poisson(rng));
          },
          [&](const Geometric& d) {
            std::geometric_distribution<long long> geometric(d.p);
            for (std::size_t i = 0; i < count; ++i) {
              out[i] = static_cast<double>(geometric(rng) + d.support_start);
            }
          },
          [&](const NegativeBinomial& d) {
            // rate ~ Gamma(k, scale (1-p)/p), i.e. Gamma rate lambda = p/(1-p)
            const double log_scale = std::log1p(-d.p) - std::log(d.p);
            for (std::size_t i = 0; i < count; ++i) {
              out[i] = poisson_draw(rng, std::exp(log_gamma_draw(rng, d.k) + log_scale));
            }
          },
          [&](const Exponential& d) {
            std::exponential_distribution<double> exponential(d.rate);
            for (std::size_t i = 0; i < count; ++i) out[i] = exponential(rng);
          },
          [&](const Pareto& d) {
            for (std::size_t i = 0; i < count; ++i) {
              out[i] = d.x_m * std::exp(-std::log(uniform_open(rng)) / d.alpha);
            }
          },
          [&](const UniformContinuous& d) {
            std::uniform_real_distribution<double> uniform(d.a, d.b);
            for (std::size_t i = 0; i < count; ++i) out[i] = uniform(rng);
          },
      },
      spec.params());
}

}  // namespace

std::vector<double> sample(const DistributionSpec& spec, std::uint64_t seed, std::size_t n,
                           Exec exec) {
  if (n == 0) throw DomainError("sample: n must be at least 1");
  std::vector<double> out(n);
  const auto blocks = static_cast<std::int64_t>((n + kSampleBlock - 1) / kSampleBlock);
  auto run_block = [&](std::int64_t b) {
    Engine rng(mix_seed(seed, static_cast<std::uint64_t>(b)));
    const std::size_t start = static_cast<std::size_t>(b) * kSampleBlock;
    const std::size_t count = std::min(kSampleBlock, n - start);
    fill_block(spec, rng, out.data() + start, count);
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < blocks; ++b) run_block(b);
  } else {
    for (std::int64_t b = 0; b < blocks; ++b) run_block(b);
  }
  return out;
}

}  // namespace ginikit
