#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bandit/harness.hpp"

namespace bandit {

// One table row: identification columns followed by the metric columns in a
// fixed order. Metrics a run does not produce stay unset and render empty.
struct ReportRow {
  std::string policy;
  std::string params;
  double effect_size = 0.0;
  long n = 0;
  long n_sims = 0;
  std::uint64_t seed = 0;
  std::optional<double> fpr, fpr_se;
  std::optional<double> power, power_se;
  std::optional<double> type_s, type_s_se;
  std::optional<double> reward, reward_se;
  std::optional<double> prop_opt, prop_opt_se;
  std::optional<double> prop_sup, prop_sup_se;
};

enum class TableFormat { Csv, Markdown, Json };

std::optional<TableFormat> table_format_from_string(const std::string& name);

ReportRow make_report_row(const ExperimentConfig& config,
                          const MetricsSummary& summary);

extern const char* const kCsvHeader;

// CSV uses full precision; markdown renders proportions to 3 decimals with
// the standard error in parentheses; JSON is an array of objects.
std::string emit_table(std::span<const ReportRow> rows, TableFormat format);

// Inverse of the CSV emitter (header required), used for round-tripping.
std::vector<ReportRow> parse_csv_table(const std::string& text);

}  // namespace bandit
