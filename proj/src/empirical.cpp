#include "ginikit/empirical.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include <fmt/format.h>

#include "ginikit/error.hpp"

namespace ginikit {

namespace {

void check_sample(const SampleSet& s) {
  if (s.values.empty()) throw DomainError("empirical: sample is empty");
  for (double v : s.values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DomainError(fmt::format("empirical: values must be finite and >= 0 (got {})", v));
    }
  }
}

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  text = text.substr(first, last - first + 1);
  if (text.size() >= 2 && text.front() == '"' && text.back() == '"') {
    text = text.substr(1, text.size() - 2);
  }
  return text;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      return fields;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

double parse_value(std::string_view field, std::size_t line_no, const std::string& path) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size() || field.empty()) {
    throw InputError(fmt::format("{}:{}: '{}' is not a number", path, line_no, field), line_no);
  }
  if (!std::isfinite(value)) {
    throw InputError(fmt::format("{}:{}: value '{}' is not finite", path, line_no, field), line_no);
  }
  if (value < 0.0) {
    throw InputError(fmt::format("{}:{}: negative value {}", path, line_no, field), line_no);
  }
  return value;
}

}  // namespace

double gini_sorted(std::span<const double> sorted) {
  const auto n = static_cast<double>(sorted.size());
  if (sorted.empty()) throw DomainError("empirical: sample is empty");
  std::vector<double> weighted(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    weighted[i] = (2.0 * static_cast<double>(i + 1) - n - 1.0) * sorted[i];
  }
  const double total = kernels::ordered_sum(sorted);
  if (!(total > 0.0)) throw DomainError("empirical: sample mean is zero");
  // sum (2i - n - 1) x_(i) / (n^2 mean) with n mean = total
  return kernels::ordered_sum(weighted) / (n * total);
}

double gini_naive(std::span<const double> values, Exec exec) {
  if (values.empty()) throw DomainError("empirical: sample is empty");
  const auto n = static_cast<double>(values.size());
  const double total = kernels::ordered_sum(values);
  if (!(total > 0.0)) throw DomainError("empirical: sample mean is zero");
  return kernels::pairwise_abs_diff_naive(values, exec) / (2.0 * n * total);
}

GiniResult empirical_gini(const SampleSet& s, const EmpiricalOptions& options) {
  check_sample(s);
  std::vector<double> sorted = s.values;
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  const double factor =
      options.variant == EmpiricalVariant::Unbiased && sorted.size() > 1 ? n / (n - 1.0) : 1.0;
  GiniResult r;
  r.method = GiniMethod::Empirical;
  r.value = factor * gini_sorted(sorted);
  r.terms = static_cast<std::int64_t>(sorted.size());
  if (options.bootstrap_resamples > 1) {
    std::vector<double> replicas = kernels::bootstrap_sorted_gini(
        sorted, options.bootstrap_resamples, options.seed, options.exec);
    double centre = 0.0;
    for (double v : replicas) centre += v;
    centre /= static_cast<double>(replicas.size());
    double var = 0.0;
    for (double v : replicas) var += (v - centre) * (v - centre);
    r.mc_standard_error = factor * std::sqrt(var / static_cast<double>(replicas.size() - 1));
    r.abs_error_estimate = *r.mc_standard_error;
  }
  return r;
}

SampleSet load_samples(const std::string& path, SampleFormat format,
                       const std::optional<std::string>& column) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("{}: cannot open file", path));
  SampleSet set;
  set.source = path;
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> index;
  bool header_seen = format == SampleFormat::Lines;
  if (format == SampleFormat::Lines && column) {
    throw InputError("a column can only be selected for csv input");
  }
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
    if (trim(view).empty()) continue;
    if (format == SampleFormat::Lines) {
      set.values.push_back(parse_value(trim(view), line_no, path));
      continue;
    }
    const auto fields = split_csv(view);
    if (!header_seen) {
      header_seen = true;
      if (!column) {
        index = 0;
      } else {
        const auto it = std::find(fields.begin(), fields.end(), std::string_view(*column));
        if (it != fields.end()) {
          index = static_cast<std::size_t>(it - fields.begin());
        } else {
          std::size_t parsed = 0;
          const auto [end, ec] =
              std::from_chars(column->data(), column->data() + column->size(), parsed);
          if (ec != std::errc() || end != column->data() + column->size()) {
            throw InputError(
                fmt::format("{}:{}: no column named '{}' in the header", path, line_no, *column),
                line_no);
          }
          if (parsed >= fields.size()) {
            throw InputError(fmt::format("{}:{}: column index {} out of range ({} columns)", path,
                                         line_no, parsed, fields.size()),
                             line_no);
          }
          index = parsed;
        }
      }
      continue;
    }
    if (*index >= fields.size()) {
      throw InputError(fmt::format("{}:{}: row has {} fields, column {} missing", path, line_no,
                                   fields.size(), *index),
                       line_no);
    }
    set.values.push_back(parse_value(fields[*index], line_no, path));
  }
  if (set.values.empty()) throw InputError(fmt::format("{}: no values found", path));
  return set;
}

}  // namespace ginikit
