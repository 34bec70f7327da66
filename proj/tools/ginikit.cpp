// ginikit command-line tool. Exit codes: 0 success, 1 numeric or input
// failure, 2 usage error or invalid parameters.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "ginikit/asymptotics.hpp"
#include "ginikit/empirical.hpp"
#include "ginikit/error.hpp"
#include "ginikit/gini.hpp"
#include "ginikit/report.hpp"
#include "ginikit/sampling.hpp"

namespace {

using namespace ginikit;

constexpr int kExitNumeric = 1;
constexpr int kExitUsage = 2;
constexpr std::uint64_t kDefaultSeed = 20240607;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DistArgs {
  std::string dist;
  std::optional<double> rate, p, lambda, k, alpha, x_m, a, b;
  int start = 0;

  void add_to(CLI::App& app, bool required) {
    auto* opt = app.add_option("--dist", dist,
                               "exponential | geometric | poisson | negbinom | pareto | uniform");
    if (required) opt->required();
    app.add_option("--rate", rate, "exponential rate");
    app.add_option("--p", p, "geometric or negbinom success probability");
    app.add_option("--lambda", lambda, "poisson mean, or negbinom lambda = p/(1-p)");
    app.add_option("--k", k, "negbinom shape");
    app.add_option("--alpha", alpha, "pareto tail index");
    app.add_option("--xm", x_m, "pareto scale (default 1)");
    app.add_option("--a", a, "uniform lower bound");
    app.add_option("--b", b, "uniform upper bound");
    app.add_option("--start", start, "geometric support start, 0 or 1");
  }

  static double need(const std::optional<double>& v, const char* flag, const std::string& dist) {
    if (!v) throw UsageError(fmt::format("--dist {} requires {}", dist, flag));
    return *v;
  }

  DistributionSpec build() const {
    if (dist == "exponential") return DistributionSpec::exponential(rate.value_or(1.0));
    if (dist == "geometric") return DistributionSpec::geometric(need(p, "--p", dist), start);
    if (dist == "poisson") return DistributionSpec::poisson(need(lambda, "--lambda", dist));
    if (dist == "negbinom") {
      if (p && lambda) throw UsageError("give either --p or --lambda, not both");
      const double pp = lambda ? p_from_lambda(*lambda) : need(p, "--p or --lambda", dist);
      return DistributionSpec::negative_binomial(need(k, "--k", dist), pp);
    }
    if (dist == "pareto") {
      return DistributionSpec::pareto(need(alpha, "--alpha", dist), x_m.value_or(1.0));
    }
    if (dist == "uniform") {
      return DistributionSpec::uniform(need(a, "--a", dist), need(b, "--b", dist));
    }
    throw UsageError(fmt::format("unknown distribution '{}'", dist));
  }
};

struct QuadArgs {
  QuadratureSpec q;
  std::string endpoint = "avoid";
  bool serial = false;

  void add_to(CLI::App& app) {
    app.add_option("--tol", q.target_abs_tol, "quadrature absolute tolerance");
    app.add_option("--panels", q.panels, "initial panel count");
    app.add_option("--nodes", q.nodes_per_panel, "Gauss-Legendre nodes per panel");
    app.add_option("--endpoint", endpoint, "singular endpoint policy: avoid | limit");
    app.add_option("--max-refinements", q.max_refinements, "refinement levels");
    app.add_option("--halfwidth", q.truncation_halfwidth, "line integral half-width T");
    app.add_flag("--serial", serial, "run kernels on one thread");
  }

  QuadratureSpec build() const {
    QuadratureSpec out = q;
    if (endpoint == "avoid") {
      out.endpoint_policy = EndpointPolicy::AvoidEndpoints;
    } else if (endpoint == "limit") {
      out.endpoint_policy = EndpointPolicy::AnalyticLimit;
    } else {
      throw UsageError(fmt::format("unknown endpoint policy '{}'", endpoint));
    }
    out.exec = serial ? Exec::Serial : Exec::Parallel;
    return out;
  }
};

GiniMethod method_from(const std::string& name) {
  const auto m = parse_method(name);
  if (!m) throw UsageError(fmt::format("unknown method '{}'", name));
  return *m;
}

GiniMethod default_method(const DistributionSpec& spec) {
  if (method_applicable(spec, GiniMethod::ClosedForm)) return GiniMethod::ClosedForm;
  if (spec.is_negative_binomial()) return GiniMethod::NBFourier;
  return spec.is_discrete() ? GiniMethod::FourierDiscrete : GiniMethod::FourierContinuous;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("GINIKIT_SEED");
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw UsageError(fmt::format("GINIKIT_SEED='{}' is not an unsigned integer", env));
  }
}

void print_result(const GiniResult& r, const std::string& distribution) {
  fmt::print("{}\n", format_value(r.value));
  fmt::print("  method              {}\n", method_name(r.method));
  fmt::print("  distribution        {}\n", distribution);
  fmt::print("  abs_error_estimate  {:.3e}\n", r.abs_error_estimate);
  if (r.imag_residual) fmt::print("  imag_residual       {:.3e}\n", *r.imag_residual);
  if (r.truncation_tail_bound) {
    fmt::print("  truncation_bound    {:.3e}\n", *r.truncation_tail_bound);
  }
  if (r.markov_tail_bound) fmt::print("  markov_bound        {:.3e}\n", *r.markov_tail_bound);
  if (r.mc_standard_error) fmt::print("  mc_standard_error   {:.3e}\n", *r.mc_standard_error);
  if (r.terms > 0) fmt::print("  terms               {}\n", r.terms);
  if (r.clamped) fmt::print("  note: clamped into [0,1] within its error estimate\n");
  if (r.out_of_domain) fmt::print("  warning: asymptotic formula is outside [0,1] here\n");
}

// Subcommands --------------------------------------------------------------------

struct ComputeCmd {
  DistArgs dist;
  QuadArgs quad;
  std::string method;
  std::int64_t mc_pairs = 1000000;
  std::optional<std::uint64_t> seed;
  bool json = false;

  int run() {
    const DistributionSpec spec = dist.build();
    const QuadratureSpec q = quad.build();
    const GiniMethod m = method.empty() ? default_method(spec) : method_from(method);
    // The series keeps its own domain message; everything else that does not
    // apply is a usage error.
    if (m != GiniMethod::NBSeries && !method_applicable(spec, m)) {
      throw UsageError(
          fmt::format("method {} does not apply to {}", method_name(m), spec.describe()));
    }
    if (m == GiniMethod::NBSeries && !spec.is_negative_binomial()) {
      throw UsageError("method nb-series needs --dist negbinom");
    }
    if (mc_pairs < 1000) throw UsageError("--mc-pairs must be at least 1000");
    const std::uint64_t s = seed ? *seed : default_seed();
    GiniResult r;
    try {
      if (m == GiniMethod::MonteCarlo) {
        r = gini_monte_carlo(spec, mc_pairs, s, q.exec);
      } else {
        r = compute_gini(spec, m, q, s, mc_pairs);
      }
    } catch (const ConvergenceError& e) {
      fmt::print(std::cerr, "error: {} (last estimate {}, error {:.3e})\n", e.what(),
                 format_value(e.last_estimate()), e.last_error());
      return kExitNumeric;
    } catch (const Error& e) {
      fmt::print(std::cerr, "error: {}\n", e.what());
      return kExitNumeric;
    }
    if (json) {
      fmt::print("{}\n", gini_result_json(r, spec.describe()));
    } else {
      print_result(r, spec.describe());
    }
    return 0;
  }
};

struct SweepCmd {
  std::optional<double> p, lambda;
  std::vector<double> k_list;
  double k_min = 1e-3, k_max = 1e2;
  int count = 50;
  std::string spacing = "log";
  std::vector<std::string> methods{"nb-fourier"};
  std::string format = "csv";
  std::string out;
  std::int64_t mc_pairs = 100000;
  std::optional<std::uint64_t> seed;
  QuadArgs quad;

  int run() {
    SweepSpec spec;
    if (p && lambda) throw UsageError("give either --p or --lambda, not both");
    if (!p && !lambda) throw UsageError("sweep needs --p or --lambda");
    spec.p = lambda ? p_from_lambda(*lambda) : *p;
    if (!k_list.empty()) {
      spec.k_grid = k_list;
    } else if (spacing == "log") {
      spec.k_grid = logspace(k_min, k_max, count);
    } else if (spacing == "linear") {
      spec.k_grid = linspace(k_min, k_max, count);
    } else {
      throw UsageError(fmt::format("unknown spacing '{}'", spacing));
    }
    spec.methods.clear();
    for (const auto& name : methods) spec.methods.push_back(method_from(name));
    if (format != "csv" && format != "json") {
      throw UsageError(fmt::format("unknown format '{}'", format));
    }
    spec.quadrature = quad.build();
    spec.seed = seed ? *seed : default_seed();
    spec.mc_pairs = mc_pairs;
    std::vector<SweepRow> rows;
    try {
      rows = run_sweep(spec);
    } catch (const DomainError&) {
      throw;
    } catch (const Error& e) {
      fmt::print(std::cerr, "error: {}\n", e.what());
      return kExitNumeric;
    }
    std::ofstream file;
    if (!out.empty()) {
      file.open(out);
      if (!file) {
        fmt::print(std::cerr, "error: {}: cannot write\n", out);
        return kExitNumeric;
      }
    }
    std::ostream& os = out.empty() ? std::cout : file;
    if (format == "csv") {
      write_sweep_csv(os, spec, rows);
    } else {
      write_sweep_json(os, spec, rows);
    }
    return 0;
  }
};

struct FiguresCmd {
  std::string out_dir = "figures";
  QuadArgs quad;

  int run() {
    try {
      for (const auto& name : write_figures(out_dir, quad.build())) {
        fmt::print("{}/{}\n", out_dir, name);
      }
    } catch (const Error& e) {
      fmt::print(std::cerr, "error: {}\n", e.what());
      return kExitNumeric;
    }
    return 0;
  }
};

struct Table1Cmd {
  int run() {
    try {
      print_table1(std::cout, run_table1());
    } catch (const Error& e) {
      fmt::print(std::cerr, "error: {}\n", e.what());
      return kExitNumeric;
    }
    return 0;
  }
};

struct EmpiricalCmd {
  std::string path;
  std::string format;
  std::optional<std::string> column;
  int resamples = 200;
  std::optional<std::uint64_t> seed;
  bool json = false;

  int run() {
    SampleFormat fmt_kind;
    if (format.empty()) {
      const bool csv = path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
      fmt_kind = csv ? SampleFormat::Csv : SampleFormat::Lines;
    } else if (format == "csv") {
      fmt_kind = SampleFormat::Csv;
    } else if (format == "lines") {
      fmt_kind = SampleFormat::Lines;
    } else {
      throw UsageError(fmt::format("unknown format '{}'", format));
    }
    if (resamples < 0) throw UsageError("--resamples must be nonnegative");
    try {
      const SampleSet set = load_samples(path, fmt_kind, column);
      EmpiricalOptions opt;
      opt.seed = seed ? *seed : default_seed();
      opt.bootstrap_resamples = resamples;
      opt.variant = EmpiricalVariant::PlugIn;
      const GiniResult plug = empirical_gini(set, opt);
      opt.variant = EmpiricalVariant::Unbiased;
      const GiniResult unbiased = empirical_gini(set, opt);
      double mean = 0.0;
      for (double v : set.values) mean += v;
      mean /= static_cast<double>(set.values.size());
      if (json) {
        nlohmann::ordered_json j;
        j["source"] = set.source;
        j["n"] = set.values.size();
        j["mean"] = mean;
        j["plug_in"] = plug.value;
        j["unbiased"] = unbiased.value;
        j["bootstrap_standard_error"] =
            plug.mc_standard_error ? nlohmann::ordered_json(*plug.mc_standard_error) : nullptr;
        fmt::print("{}\n", j.dump(2));
      } else {
        fmt::print("source              {}\n", set.source);
        fmt::print("n                   {}\n", set.values.size());
        fmt::print("mean                {}\n", format_value(mean));
        fmt::print("gini (plug-in)      {}\n", format_value(plug.value));
        fmt::print("gini (unbiased)     {}\n", format_value(unbiased.value));
        if (plug.mc_standard_error) {
          fmt::print("bootstrap se        {:.3e} ({} resamples)\n", *plug.mc_standard_error,
                     resamples);
        }
      }
    } catch (const Error& e) {
      fmt::print(std::cerr, "error: {}\n", e.what());
      return kExitNumeric;
    }
    return 0;
  }
};

struct ValidateCmd {
  DistArgs dist;
  QuadArgs quad;
  std::optional<std::uint64_t> seed;
  std::int64_t mc_pairs = 1000000;
  std::string inject_fault;
  double fault_size = 1e-3;

  int run() {
    ValidationOptions opt;
    if (!dist.dist.empty()) opt.grid.push_back(dist.build());
    opt.seed = seed ? *seed : default_seed();
    if (mc_pairs < 1000) throw UsageError("--mc-pairs must be at least 1000");
    opt.mc_pairs = mc_pairs;
    opt.quadrature = quad.build();
    if (!inject_fault.empty()) opt.inject_fault = method_from(inject_fault);
    opt.fault_size = fault_size;
    const ValidationReport report = run_validation(opt);
    print_validation(std::cout, report);
    return report.passed() ? 0 : kExitNumeric;
  }
};

struct SampleCmd {
  DistArgs dist;
  std::int64_t n = 1000;
  std::optional<std::uint64_t> seed;
  std::string out;

  int run() {
    const DistributionSpec spec = dist.build();
    if (n < 1) throw UsageError("--n must be positive");
    const auto values = sample(spec, seed ? *seed : default_seed(), static_cast<std::size_t>(n));
    std::ofstream file;
    if (!out.empty()) {
      file.open(out);
      if (!file) {
        fmt::print(std::cerr, "error: {}: cannot write\n", out);
        return kExitNumeric;
      }
    }
    std::ostream& os = out.empty() ? std::cout : file;
    for (double v : values) os << fmt::format("{:.17g}\n", v);
    return 0;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gini coefficients of probability distributions"};
  app.require_subcommand(1);

  ComputeCmd compute;
  auto* c = app.add_subcommand("compute", "Gini coefficient of one distribution");
  compute.dist.add_to(*c, true);
  compute.quad.add_to(*c);
  c->add_option("--method", compute.method, "method name (default depends on --dist)");
  c->add_option("--mc-pairs", compute.mc_pairs, "Monte-Carlo pairs");
  c->add_option("--seed", compute.seed, "seed (default GINIKIT_SEED or built-in)");
  c->add_flag("--json", compute.json, "print a JSON object");

  SweepCmd sweep;
  auto* s = app.add_subcommand("sweep", "Gini of NB(k, p) over a grid of k");
  s->add_option("--p", sweep.p, "fixed p");
  s->add_option("--lambda", sweep.lambda, "fixed lambda = p/(1-p)");
  s->add_option("--k", sweep.k_list, "explicit k values")->delimiter(',');
  s->add_option("--k-min", sweep.k_min, "smallest k");
  s->add_option("--k-max", sweep.k_max, "largest k");
  s->add_option("--count", sweep.count, "grid points");
  s->add_option("--spacing", sweep.spacing, "log | linear");
  s->add_option("--method", sweep.methods, "method names")->delimiter(',');
  s->add_option("--format", sweep.format, "csv | json");
  s->add_option("--out", sweep.out, "output file (default stdout)");
  s->add_option("--mc-pairs", sweep.mc_pairs, "Monte-Carlo pairs per point");
  s->add_option("--seed", sweep.seed, "seed");
  sweep.quad.add_to(*s);

  FiguresCmd figures;
  auto* f = app.add_subcommand("figures", "write the data for figures 1-3 and a gnuplot script");
  f->add_option("--out-dir", figures.out_dir, "output directory");
  figures.quad.add_to(*f);

  Table1Cmd table1;
  app.add_subcommand("table1", "reproduce the Jakarta-Depok and Batan table");

  EmpiricalCmd empirical;
  auto* e = app.add_subcommand("empirical", "Gini of sample data");
  e->add_option("path", empirical.path, "data file")->required();
  e->add_option("--format", empirical.format, "csv | lines (default from extension)");
  e->add_option("--column", empirical.column, "csv column name or 0-based index");
  e->add_option("--resamples", empirical.resamples, "bootstrap resamples");
  e->add_option("--seed", empirical.seed, "seed");
  e->add_flag("--json", empirical.json, "print a JSON object");

  ValidateCmd validate;
  auto* v = app.add_subcommand("validate", "cross-check every applicable method");
  validate.dist.add_to(*v, false);
  validate.quad.add_to(*v);
  v->add_option("--seed", validate.seed, "seed");
  v->add_option("--mc-pairs", validate.mc_pairs, "Monte-Carlo pairs");
  v->add_option("--inject-fault", validate.inject_fault, "perturb this method (test hook)");
  v->add_option("--fault-size", validate.fault_size, "size of the injected perturbation");

  SampleCmd sample_cmd;
  auto* sm = app.add_subcommand("sample", "draw samples, one per line");
  sample_cmd.dist.add_to(*sm, true);
  sm->add_option("--n", sample_cmd.n, "number of draws");
  sm->add_option("--seed", sample_cmd.seed, "seed");
  sm->add_option("--out", sample_cmd.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& ok) {
    return app.exit(ok);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  try {
    if (*c) return compute.run();
    if (*s) return sweep.run();
    if (*f) return figures.run();
    if (app.got_subcommand("table1")) return table1.run();
    if (*e) return empirical.run();
    if (*v) return validate.run();
    if (*sm) return sample_cmd.run();
  } catch (const UsageError& err) {
    fmt::print(std::cerr, "usage error: {}\n", err.what());
    return kExitUsage;
  } catch (const DomainError& err) {
    fmt::print(std::cerr, "invalid parameters: {}\n", err.what());
    return kExitUsage;
  } catch (const UnsupportedError& err) {
    fmt::print(std::cerr, "invalid parameters: {}\n", err.what());
    return kExitUsage;
  } catch (const std::exception& err) {
    fmt::print(std::cerr, "error: {}\n", err.what());
    return kExitNumeric;
  }
  return kExitUsage;
}
