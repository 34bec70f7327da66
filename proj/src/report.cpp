#include "ginikit/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "ginikit/asymptotics.hpp"
#include "ginikit/error.hpp"

namespace ginikit {

namespace {

// Enough digits for plotting and for byte-identical reruns.
std::string csv_number(double v) { return fmt::format("{:.12g}", v); }

void check_sweep(const SweepSpec& spec) {
  if (spec.k_grid.empty()) throw DomainError("sweep: k grid is empty");
  if (spec.methods.empty()) throw DomainError("sweep: no methods requested");
  if (!(spec.p > 0.0 && spec.p < 1.0)) {
    throw DomainError(fmt::format("sweep: p must lie in (0,1) (got {})", spec.p));
  }
  for (double k : spec.k_grid) {
    if (!(k > 0.0) || !std::isfinite(k)) {
      throw DomainError(fmt::format("sweep: k values must be positive (got {})", k));
    }
  }
  const auto probe = DistributionSpec::negative_binomial(1.0, spec.p);
  for (GiniMethod m : spec.methods) {
    if (!method_applicable(probe, m)) {
      throw DomainError(fmt::format("sweep: method {} does not apply to negbinom with p={}",
                                    method_name(m), spec.p));
    }
  }
}

}  // namespace

std::string format_value(double v) { return fmt::format("{:.7g}", v); }

std::string gini_result_json(const GiniResult& r, const std::string& distribution) {
  nlohmann::ordered_json j;
  j["method"] = std::string(method_name(r.method));
  j["value"] = r.value;
  j["abs_error_estimate"] = r.abs_error_estimate;
  j["imag_residual"] = r.imag_residual ? nlohmann::ordered_json(*r.imag_residual) : nullptr;
  j["mc_standard_error"] =
      r.mc_standard_error ? nlohmann::ordered_json(*r.mc_standard_error) : nullptr;
  j["truncation_tail_bound"] =
      r.truncation_tail_bound ? nlohmann::ordered_json(*r.truncation_tail_bound) : nullptr;
  j["terms"] = r.terms;
  j["clamped"] = r.clamped;
  j["out_of_domain"] = r.out_of_domain;
  j["distribution"] = distribution;
  return j.dump(2);
}

// Sweeps -----------------------------------------------------------------------

std::vector<double> logspace(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > 0.0) || count < 1) {
    throw DomainError("logspace: bounds must be positive and count >= 1");
  }
  if (count == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(count));
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw DomainError("linspace: count must be >= 1");
  if (count == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  }
  out.back() = hi;
  return out;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  check_sweep(spec);
  std::vector<double> ks = spec.k_grid;
  std::sort(ks.begin(), ks.end());
  const AsymptoticConstants constants = asymptotic_constants(spec.p);
  std::vector<SweepRow> rows(ks.size());
  std::vector<std::string> errors(ks.size());
  // Each point writes only its own slot, so the output order is fixed by k.
  // Inner kernels run serially inside this loop.
  QuadratureSpec q = spec.quadrature;
  q.exec = Exec::Serial;
  const auto n = static_cast<std::int64_t>(ks.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    SweepRow& row = rows[idx];
    row.k = ks[idx];
    try {
      const auto dist = DistributionSpec::negative_binomial(row.k, spec.p);
      for (GiniMethod m : spec.methods) {
        GiniResult r;
        if (m == GiniMethod::MonteCarlo) {
          r = gini_monte_carlo(dist, spec.mc_pairs, mix_seed(spec.seed, idx), Exec::Serial);
        } else {
          r = compute_gini(dist, m, q, spec.seed, spec.mc_pairs);
        }
        row.values.push_back(r.value);
      }
    } catch (const std::exception& e) {
      errors[idx] = fmt::format("sweep at k={}: {}", row.k, e.what());
    }
    row.one_plus_ck = 1.0 + constants.small_k_slope_c * row.k;
    row.large_k_limit = constants.large_k_limit;
    if (!row.values.empty()) row.sqrt_k_times_g = std::sqrt(row.k) * row.values.front();
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw NumericalError(e);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  out << 'k';
  for (GiniMethod m : spec.methods) out << ',' << method_name(m);
  out << ",one_plus_ck,sqrt_k_times_g,large_k_limit\n";
  for (const auto& row : rows) {
    out << csv_number(row.k);
    for (double v : row.values) out << ',' << csv_number(v);
    out << ',' << csv_number(row.one_plus_ck) << ',' << csv_number(row.sqrt_k_times_g) << ','
        << csv_number(row.large_k_limit) << '\n';
  }
}

void write_sweep_json(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  nlohmann::ordered_json j;
  j["p"] = spec.p;
  j["lambda"] = lambda_from_p(spec.p);
  auto& methods = j["methods"] = nlohmann::ordered_json::array();
  for (GiniMethod m : spec.methods) methods.push_back(std::string(method_name(m)));
  auto& out_rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json r;
    r["k"] = row.k;
    auto& values = r["values"] = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < spec.methods.size() && i < row.values.size(); ++i) {
      values[std::string(method_name(spec.methods[i]))] = row.values[i];
    }
    r["one_plus_ck"] = row.one_plus_ck;
    r["sqrt_k_times_g"] = row.sqrt_k_times_g;
    r["large_k_limit"] = row.large_k_limit;
    out_rows.push_back(std::move(r));
  }
  out << j.dump(2) << '\n';
}

std::vector<std::string> write_figures(const std::string& dir, const QuadratureSpec& q) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  struct Figure {
    const char* stem;
    std::vector<double> grid;
    std::vector<GiniMethod> methods;
  };
  const std::vector<Figure> figures{
      {"fig1", logspace(1e-3, 1e2, 50), {GiniMethod::NBFourier}},
      {"fig2", logspace(1e-4, 1e-1, 31), {GiniMethod::NBFourier, GiniMethod::AsymptoticSmallK}},
      {"fig3", logspace(1e1, 1e4, 31), {GiniMethod::NBFourier, GiniMethod::AsymptoticLargeK}},
  };
  const std::vector<double> ps{0.9, 0.5, 0.1};
  std::vector<std::string> written;
  for (const auto& fig : figures) {
    for (double p : ps) {
      SweepSpec spec;
      spec.p = p;
      spec.k_grid = fig.grid;
      spec.methods = fig.methods;
      spec.quadrature = q;
      const auto rows = run_sweep(spec);
      const std::string name = fmt::format("{}_p{}.csv", fig.stem, p);
      std::ofstream out(fs::path(dir) / name);
      if (!out) throw Error(fmt::format("{}: cannot write", (fs::path(dir) / name).string()));
      write_sweep_csv(out, spec, rows);
      written.push_back(name);
    }
  }

  const std::string script = "figures.gp";
  std::ofstream gp(fs::path(dir) / script);
  if (!gp) throw Error(fmt::format("{}: cannot write", (fs::path(dir) / script).string()));
  gp << "set datafile separator ','\n"
        "set key autotitle columnhead\n"
        "set terminal pngcairo size 1500,450\n";
  for (const char* stem : {"fig1", "fig2", "fig3"}) {
    gp << fmt::format("set output '{}.png'\nset multiplot layout 1,3\n", stem);
    for (double p : ps) {
      const std::string csv = fmt::format("{}_p{}.csv", stem, p);
      gp << fmt::format("set title 'p = {}'\n", p);
      if (std::string_view(stem) == "fig1") {
        gp << "set logscale x\nset xlabel 'k'\nset ylabel 'G'\n"
           << fmt::format("plot '{}' using 1:2 with lines\n", csv);
      } else if (std::string_view(stem) == "fig2") {
        gp << "set logscale x\nset xlabel 'k'\nset ylabel 'G'\n"
           << fmt::format("plot '{0}' using 1:2 with lines, '{0}' using 1:4 with lines dt 2\n",
                          csv);
      } else {
        gp << "set logscale x\nset xlabel 'k'\nset ylabel 'sqrt(k) G'\n"
           << fmt::format("plot '{0}' using 1:5 with lines, '{0}' using 1:6 with lines dt 2\n",
                          csv);
      }
    }
    gp << "unset multiplot\n";
  }
  written.push_back(script);
  return written;
}

// Table 1 ---------------------------------------------------------------------

std::vector<Table1Row> run_table1(const QuadratureSpec& q) {
  struct Printed {
    const char* location;
    double r0, k, p, data, fourier, asymptotic;
  };
  static constexpr Printed kRows[] = {
      {"Jakarta-Depok", 6.79, 0.06, 0.008, 0.9213411, 0.9269144, 0.9193061},
      {"Batan", 2.47, 0.2, 0.06, 0.83191721, 0.8151066, 0.7623808},
  };
  std::vector<Table1Row> rows;
  for (const auto& pr : kRows) {
    Table1Row row{};
    row.location = pr.location;
    row.r0 = pr.r0;
    row.k = pr.k;
    row.p = pr.p;
    row.implied_p = 1.0 / (1.0 + pr.r0 / pr.k);
    row.p_mismatch = std::abs(row.implied_p - pr.p) / pr.p > kTable1MismatchThreshold;
    row.printed_from_data = pr.data;
    row.printed_fourier = pr.fourier;
    row.printed_asymptotic = pr.asymptotic;
    row.fourier = gini_nb_fourier(pr.k, pr.p, q);
    row.asymptotic = gini_small_k(pr.k, pr.p);
    rows.push_back(std::move(row));
  }
  return rows;
}

void print_table1(std::ostream& out, const std::vector<Table1Row>& rows) {
  fmt::print(out, "{:<14} {:>5} {:>5} {:>6} {:>9} | {:>10} {:>10} {:>9} | {:>10} {:>10} {:>9}\n",
             "location", "R0", "k", "p", "implied_p", "G_fourier", "printed", "abs_dev",
             "G_asympt", "printed", "abs_dev");
  for (const auto& r : rows) {
    fmt::print(out,
               "{:<14} {:>5} {:>5} {:>6} {:>9.5f} | {:>10} {:>10} {:>9.2e} | {:>10} {:>10} "
               "{:>9.2e}\n",
               r.location, r.r0, r.k, r.p, r.implied_p, format_value(r.fourier.value),
               format_value(r.printed_fourier), std::abs(r.fourier.value - r.printed_fourier),
               format_value(r.asymptotic.value), format_value(r.printed_asymptotic),
               std::abs(r.asymptotic.value - r.printed_asymptotic));
  }
  out << '\n';
  for (const auto& r : rows) {
    fmt::print(out, "{}: G computed explicitly from data is printed as {}; not reproducible "
                    "here, the source dataset is unpublished.\n",
               r.location, r.printed_from_data);
  }
  for (const auto& r : rows) {
    if (r.p_mismatch) {
      fmt::print(out,
                 "warning: {}: printed p = {} differs from (1 + R0/k)^-1 = {:.5f} by {:.1f}%; "
                 "computations use the printed p.\n",
                 r.location, r.p, r.implied_p, 100.0 * std::abs(r.implied_p - r.p) / r.p);
    }
  }
}

// Validation ----------------------------------------------------------------------

std::vector<DistributionSpec> default_validation_grid() {
  std::vector<DistributionSpec> grid;
  for (double p : {0.1, 0.5, 0.9}) grid.push_back(DistributionSpec::geometric(p));
  for (double lambda : {0.5, 1.0, 5.0}) grid.push_back(DistributionSpec::poisson(lambda));
  for (double k : {0.06, 0.5, 1.0, 2.0, 10.0}) {
    for (double p : {0.1, 0.5, 0.9}) grid.push_back(DistributionSpec::negative_binomial(k, p));
  }
  grid.push_back(DistributionSpec::exponential(1.0));
  grid.push_back(DistributionSpec::uniform(0.0, 1.0));
  for (double alpha : {1.5, 2.0, 3.0}) grid.push_back(DistributionSpec::pareto(alpha));
  return grid;
}

ValidationReport run_validation(const ValidationOptions& options) {
  const auto grid = options.grid.empty() ? default_validation_grid() : options.grid;
  ValidationReport report;
  std::uint64_t case_index = 0;
  for (const auto& spec : grid) {
    ValidationCase vc;
    vc.distribution = spec.describe();
    const std::uint64_t seed = mix_seed(options.seed, case_index++);
    for (GiniMethod m : all_methods()) {
      // Asymptotic formulas are approximations, not representations.
      if (m == GiniMethod::AsymptoticSmallK || m == GiniMethod::AsymptoticLargeK) continue;
      if (!method_applicable(spec, m)) continue;
      MethodOutcome outcome{m, std::nullopt, {}};
      try {
        GiniResult r = compute_gini(spec, m, options.quadrature, seed, options.mc_pairs);
        if (options.inject_fault && *options.inject_fault == m) r.value += options.fault_size;
        outcome.result = r;
      } catch (const std::exception& e) {
        outcome.error = e.what();
        report.failures.push_back(
            fmt::format("{}: {}: {}", vc.distribution, method_name(m), e.what()));
      }
      vc.outcomes.push_back(std::move(outcome));
    }
    for (std::size_t a = 0; a < vc.outcomes.size(); ++a) {
      for (std::size_t b = a + 1; b < vc.outcomes.size(); ++b) {
        const auto& ra = vc.outcomes[a].result;
        const auto& rb = vc.outcomes[b].result;
        if (!ra || !rb) continue;
        const double diff = std::abs(ra->value - rb->value);
        const double se_a = ra->mc_standard_error.value_or(0.0);
        const double se_b = rb->mc_standard_error.value_or(0.0);
        double allowed = 0.0;
        if (se_a > 0.0 || se_b > 0.0) {
          const double det_err = (se_a > 0.0 ? 0.0 : ra->abs_error_estimate) +
                                 (se_b > 0.0 ? 0.0 : rb->abs_error_estimate);
          allowed = options.mc_sigmas * std::hypot(se_a, se_b) + det_err;
        } else {
          allowed = ra->abs_error_estimate + rb->abs_error_estimate + options.slack;
        }
        if (!(diff <= allowed)) {
          report.disagreements.push_back(
              {vc.distribution, vc.outcomes[a].method, vc.outcomes[b].method, diff, allowed});
        }
      }
    }
    report.cases.push_back(std::move(vc));
  }
  return report;
}

void print_validation(std::ostream& out, const ValidationReport& report) {
  for (const auto& vc : report.cases) {
    fmt::print(out, "{}\n", vc.distribution);
    for (const auto& o : vc.outcomes) {
      if (o.result) {
        std::string extra;
        if (o.result->mc_standard_error) {
          extra = fmt::format("  se {:.2e}", *o.result->mc_standard_error);
        }
        fmt::print(out, "  {:<19} {:>10}  err {:.2e}{}\n", method_name(o.method),
                   format_value(o.result->value), o.result->abs_error_estimate, extra);
      } else {
        fmt::print(out, "  {:<19} {:>10}  {}\n", method_name(o.method), "error", o.error);
      }
    }
    // Pairwise |difference| matrix, upper triangle.
    std::vector<const MethodOutcome*> ok;
    for (const auto& o : vc.outcomes) {
      if (o.result) ok.push_back(&o);
    }
    if (ok.size() > 1) {
      fmt::print(out, "  {:<19}", "|diff|");
      for (std::size_t b = 1; b < ok.size(); ++b) {
        fmt::print(out, " {:>9.9}", method_name(ok[b]->method));
      }
      out << '\n';
      for (std::size_t a = 0; a + 1 < ok.size(); ++a) {
        fmt::print(out, "  {:<19}", method_name(ok[a]->method));
        for (std::size_t b = 1; b < ok.size(); ++b) {
          if (b <= a) {
            fmt::print(out, " {:>9}", "");
          } else {
            fmt::print(out, " {:>9.2e}", std::abs(ok[a]->result->value - ok[b]->result->value));
          }
        }
        out << '\n';
      }
    }
  }
  out << '\n';
  for (const auto& d : report.disagreements) {
    fmt::print(out, "DISAGREE {}: {} vs {}: |diff| {:.3e} > allowed {:.3e}\n", d.distribution,
               method_name(d.first), method_name(d.second), d.difference, d.allowed);
  }
  for (const auto& f : report.failures) fmt::print(out, "FAILED {}\n", f);
  fmt::print(out, "validation {}: {} distributions, {} disagreements, {} failures\n",
             report.passed() ? "passed" : "FAILED", report.cases.size(),
             report.disagreements.size(), report.failures.size());
}

}  // namespace ginikit
