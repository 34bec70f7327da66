// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ginikit/asymptotics.hpp"
#include "ginikit/empirical.hpp"
#include "ginikit/error.hpp"
#include "ginikit/gini.hpp"
#include "ginikit/report.hpp"
#include "ginikit/sampling.hpp"
#include "../oracles.hpp"

using namespace ginikit;
using D = DistributionSpec;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

struct Criterion {
  const char* id;
  const char* title;
  double time_limit_s;
  std::function<void(Check&)> body;
};

// Closed forms at 1e-12 against the formulas, and the geometric ones against
// the independent survival-sum oracle.
void ac1(Check& c) {
  const double tol = 1e-12;
  c.expect(gini_closed_form(D::exponential(1.0)).value == 0.5, "exponential != 0.5");
  c.expect(gini_closed_form(D::exponential(0.3)).value == 0.5, "exponential(0.3) != 0.5");
  for (int i = 1; i <= 9; ++i) {
    const double p = 0.1 * i;
    const double g0 = gini_closed_form(D::geometric(p, 0)).value;
    const double g1 = gini_closed_form(D::geometric(p, 1)).value;
    c.expect(std::abs(g0 - 1.0 / (2.0 - p)) < tol, fmt::format("geometric p={}", p));
    c.expect(std::abs(g1 - (1.0 - p) / (2.0 - p)) < tol, fmt::format("shifted geometric p={}", p));
    const auto pmf = oracle::nb_pmf(1.0L, static_cast<long double>(p));
    c.expect(std::abs(g0 - static_cast<double>(oracle::gini_min_form(pmf))) < tol,
             fmt::format("geometric p={} vs oracle", p));
  }
  for (double alpha : {1.5, 2.0, 3.0}) {
    c.expect(std::abs(gini_closed_form(D::pareto(alpha)).value - 1.0 / (2.0 * alpha - 1.0)) < tol,
             fmt::format("pareto alpha={}", alpha));
  }
  for (auto [a, b] : {std::pair{0.0, 1.0}, std::pair{1.0, 3.0}, std::pair{2.5, 4.0}}) {
    c.expect(std::abs(gini_closed_form(D::uniform(a, b)).value - (b - a) / (3.0 * (a + b))) < tol,
             fmt::format("uniform({}, {})", a, b));
  }
}

void ac2(Check& c) {
  ValidationOptions opt;
  opt.mc_pairs = 1000000;
  opt.seed = 20240607;
  const auto report = run_validation(opt);
  c.expect(report.cases.size() == 26, fmt::format("grid has {} cases", report.cases.size()));
  for (const auto& d : report.disagreements) {
    c.expect(false, fmt::format("{}: {} vs {} differ by {:.3e} > {:.3e}", d.distribution,
                                method_name(d.first), method_name(d.second), d.difference,
                                d.allowed));
  }
  for (const auto& f : report.failures) c.expect(false, f);
  for (const auto& vc : report.cases) {
    for (const auto& o : vc.outcomes) {
      if (!o.result) continue;
      c.expect(o.result->value >= 0.0 && o.result->value <= 1.0,
               fmt::format("{} {} outside [0,1]", vc.distribution, method_name(o.method)));
      if (o.result->imag_residual) {
        c.expect(*o.result->imag_residual < 1e-6,
                 fmt::format("{} {} imaginary residual {:.3e}", vc.distribution,
                             method_name(o.method), *o.result->imag_residual));
      }
    }
  }
}

void ac3(Check& c) {
  struct Row {
    double k, p, fourier, asymptotic;
  };
  for (const Row r : {Row{0.06, 0.008, 0.9269144, 0.9193061}, Row{0.2, 0.06, 0.8151066, 0.7623808}}) {
    const double f = gini_nb_fourier(r.k, r.p).value;
    const double a = gini_small_k(r.k, r.p).value;
    c.expect(std::abs(f - r.fourier) <= 1e-4, fmt::format("fourier k={}: {}", r.k, f));
    c.expect(std::abs(a - r.asymptotic) <= 1e-4, fmt::format("asymptotic k={}: {}", r.k, a));
  }
}

void ac4(Check& c) {
  for (double p : {0.1, 0.5, 0.9}) {
    const double slope = small_k_slope(p);
    std::vector<double> r;
    for (double k : {1e-3, 1e-2, 1e-1}) {
      r.push_back(std::abs(gini_nb_fourier(k, p).value - 1.0 - slope * k) / k);
    }
    c.expect(r[0] < r[1] && r[1] < r[2],
             fmt::format("p={}: r = {:.3e} {:.3e} {:.3e} not increasing", p, r[0], r[1], r[2]));
    c.expect(r[0] < 0.05 * std::abs(slope), fmt::format("p={}: r(1e-3) = {:.3e}", p, r[0]));
  }
}

void ac5(Check& c) {
  for (double p : {0.1, 0.5, 0.9}) {
    const double limit = std::sqrt((1.0 + lambda_from_p(p)) / kPi);
    std::vector<double> s;
    for (double k : {1e2, 1e3, 1e4}) {
      s.push_back(std::abs(std::sqrt(k) * gini_nb_fourier(k, p).value - limit));
    }
    c.expect(s[0] > s[1] && s[1] > s[2],
             fmt::format("p={}: s = {:.3e} {:.3e} {:.3e} not decreasing", p, s[0], s[1], s[2]));
    c.expect(s[2] / limit <= 0.05, fmt::format("p={}: relative deviation {:.3e}", p, s[2] / limit));
  }
}

void ac6(Check& c) {
  for (double lambda : {0.1, 1.0, 10.0}) {
    for (std::int64_t j : {0, 1, 2}) {
      const auto pc = small_k_pmf_check(j, 1e-3, lambda);
      const double rel = std::abs(pc.exact - pc.approx) / pc.approx;
      c.expect(rel < 0.01, fmt::format("pmf j={} lambda={}: relative remainder {:.3e}", j, lambda, rel));
    }
    const double gap = std::abs(small_k_slope_from_series(lambda) - small_k_slope(p_from_lambda(lambda)));
    c.expect(gap < 1e-8, fmt::format("slope identity lambda={}: gap {:.3e}", lambda, gap));
  }
  const auto s = clt_normalization_check(1e4, 1.0, 100000, 20240607);
  c.expect(std::abs(s.mean) < 0.02, fmt::format("clt mean {:.4f}", s.mean));
  c.expect(std::abs(s.variance - 1.0) < 0.03, fmt::format("clt variance {:.4f}", s.variance));
  c.expect(s.ks < 0.01, fmt::format("clt ks {:.4f}", s.ks));
}

void ac7(Check& c) {
  for (double k : {1.0, 2.0, 5.0}) {
    for (double p : {0.85, 0.9, 0.95}) {
      const double diff = std::abs(gini_nb_series(k, p).value - gini_nb_fourier(k, p).value);
      c.expect(diff < 1e-7, fmt::format("k={} p={}: |series - fourier| = {:.3e}", k, p, diff));
    }
  }
  for (double p : {2.0 * (std::sqrt(2.0) - 1.0), 0.8, 0.5, 0.3}) {
    bool refused = false;
    try {
      gini_nb_series(1.0, p);
    } catch (const DomainError&) {
      refused = true;
    }
    c.expect(refused, fmt::format("series accepted p={}", p));
  }
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void ac8(Check& c) {
  namespace fs = std::filesystem;
  const auto base = fs::temp_directory_path() / "ginikit_acceptance_figures";
  fs::remove_all(base);
  const auto files = write_figures((base / "a").string());
  const auto again = write_figures((base / "b").string());
  c.expect(files == again, "file lists differ");
  for (const auto& f : files) {
    const auto a = slurp(base / "a" / f);
    c.expect(!a.empty(), f + " is empty");
    c.expect(a == slurp(base / "b" / f), f + " differs between runs");
    if (f.size() < 4 || f.substr(f.size() - 4) != ".csv") continue;
    // Second column is the NB Fourier value; it must fall strictly along k.
    std::istringstream lines(a);
    std::string line;
    std::getline(lines, line);
    c.expect(line.rfind("k,nb-fourier,", 0) == 0, f + " header: " + line);
    double prev = 2.0;
    int rows = 0;
    while (std::getline(lines, line)) {
      const auto first = line.find(',');
      const double g = std::stod(line.substr(first + 1, line.find(',', first + 1) - first - 1));
      c.expect(g < prev, fmt::format("{} not decreasing at row {}", f, rows));
      prev = g;
      ++rows;
    }
    c.expect(rows > 10, f + " has too few rows");
  }
  fs::remove_all(base);
}

void ac9(Check& c) {
  const double nb_ref = gini_nb_fourier(0.5, 0.5).value;
  struct Case {
    D spec;
    double reference;
  };
  for (const auto& cs : {Case{D::exponential(1.0), 0.5}, Case{D::negative_binomial(0.5, 0.5), nb_ref}}) {
    const SampleSet s{sample(cs.spec, 20240607, 1000000), "synthetic:20240607"};
    const auto r = empirical_gini(s, {EmpiricalVariant::PlugIn, 200, 1});
    const double se = r.mc_standard_error.value_or(0.0);
    c.expect(se > 0.0 && std::abs(r.value - cs.reference) <= 3.0 * se,
             fmt::format("{}: {} vs {} (se {:.2e})", cs.spec.describe(), r.value, cs.reference, se));
  }
  std::mt19937_64 rng(9);
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> v(2000);
  for (auto& x : v) x = expo(rng);
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  const double diff = std::abs(gini_sorted(sorted) - gini_naive(v));
  c.expect(diff < 1e-12, fmt::format("sorted vs naive differ by {:.3e}", diff));
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "closed forms", 1.0, ac1},
      {"AC2", "cross-representation agreement", 300.0, ac2},
      {"AC3", "table 1 reproduction", 10.0, ac3},
      {"AC4", "small-k asymptotics", 60.0, ac4},
      {"AC5", "large-k asymptotics", 300.0, ac5},
      {"AC6", "appendix oracles", 120.0, ac6},
      {"AC7", "series/Fourier consistency", 10.0, ac7},
      {"AC8", "figure regeneration", 120.0, ac8},
      {"AC9", "empirical estimator", 120.0, ac9},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.body(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > cr.time_limit_s) {
      check.failures.push_back(fmt::format("took {:.1f} s, limit {:.0f} s", seconds, cr.time_limit_s));
    }
    const bool ok = check.failures.empty();
    failed += ok ? 0 : 1;
    std::cout << fmt::format("{} {} {} ({:.2f} s)\n", cr.id, ok ? "PASS" : "FAIL", cr.title, seconds);
    for (const auto& f : check.failures) std::cout << "    " << f << '\n';
    std::cout.flush();
  }
  std::cout << (failed == 0 ? "all criteria passed\n" : fmt::format("{} criteria failed\n", failed));
  return failed == 0 ? 0 : 1;
}
