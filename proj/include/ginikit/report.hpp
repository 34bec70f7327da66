#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ginikit/gini.hpp"

namespace ginikit {

// Sweeps over k for NB(k, p) ------------------------------------------------

struct SweepSpec {
  double p = 0.5;
  std::vector<double> k_grid;
  std::vector<GiniMethod> methods{GiniMethod::NBFourier};
  QuadratureSpec quadrature{};
  std::uint64_t seed = 0;
  std::int64_t mc_pairs = 100000;
};

struct SweepRow {
  double k = 0.0;
  /// One value per SweepSpec::methods entry.
  std::vector<double> values;
  double one_plus_ck = 0.0;
  /// sqrt(k) times the first method's value.
  double sqrt_k_times_g = 0.0;
  double large_k_limit = 0.0;
};

std::vector<double> logspace(double lo, double hi, int count);
std::vector<double> linspace(double lo, double hi, int count);

/// Grid points are evaluated concurrently; rows come back in ascending k.
/// Throws DomainError for an empty grid or a method that does not apply.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// Header: k,<method names>,one_plus_ck,sqrt_k_times_g,large_k_limit
void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows);
void write_sweep_json(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRow>& rows);

/// Writes the three figure data sets for p in {0.9, 0.5, 0.1} plus a
/// gnuplot script into `dir`. Returns the written file names.
std::vector<std::string> write_figures(const std::string& dir, const QuadratureSpec& q = {});

// Table 1 -------------------------------------------------------------------

struct Table1Row {
  std::string location;
  double r0;
  double k;
  double p;
  /// (1 + R0/k)^-1, the p implied by the printed R0 and k.
  double implied_p;
  bool p_mismatch;
  double printed_from_data;
  double printed_fourier;
  double printed_asymptotic;
  GiniResult fourier;
  GiniResult asymptotic;
};

/// Relative gap between printed and implied p above which a row is flagged.
inline constexpr double kTable1MismatchThreshold = 0.05;

std::vector<Table1Row> run_table1(const QuadratureSpec& q = {});
void print_table1(std::ostream& out, const std::vector<Table1Row>& rows);

// Cross-method validation ------------------------------------------------------

struct ValidationOptions {
  /// Empty means the default grid.
  std::vector<DistributionSpec> grid;
  std::uint64_t seed = 0;
  std::int64_t mc_pairs = 1000000;
  double slack = 1e-6;
  double mc_sigmas = 3.0;
  QuadratureSpec quadrature{};
  /// Test hook: perturbs this method's value by `fault_size`.
  std::optional<GiniMethod> inject_fault;
  double fault_size = 1e-3;
};

struct MethodOutcome {
  GiniMethod method;
  std::optional<GiniResult> result;
  std::string error;
};

struct ValidationCase {
  std::string distribution;
  std::vector<MethodOutcome> outcomes;
};

struct Disagreement {
  std::string distribution;
  GiniMethod first;
  GiniMethod second;
  double difference;
  double allowed;
};

struct ValidationReport {
  std::vector<ValidationCase> cases;
  std::vector<Disagreement> disagreements;
  /// Applicable methods that threw, as "distribution: method: message".
  std::vector<std::string> failures;
  bool passed() const { return disagreements.empty() && failures.empty(); }
};

/// Geometric p in {0.1,0.5,0.9}, Poisson lambda in {0.5,1,5},
/// NB {0.06,0.5,1,2,10} x {0.1,0.5,0.9}, Exponential(1), Uniform(0,1),
/// Pareto alpha in {1.5,2,3}.
std::vector<DistributionSpec> default_validation_grid();

ValidationReport run_validation(const ValidationOptions& options);
void print_validation(std::ostream& out, const ValidationReport& report);

// Output helpers ---------------------------------------------------------------

/// "%.7g".
std::string format_value(double v);

/// {"method", "value", "abs_error_estimate", "imag_residual", "mc_standard_error",
///  "truncation_tail_bound", "distribution"}; absent diagnostics are null.
std::string gini_result_json(const GiniResult& r, const std::string& distribution);

}  // namespace ginikit
