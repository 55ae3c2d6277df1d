#include "bandit/report.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace bandit {

const char* const kCsvHeader =
    "policy,params,effect_size,n,n_sims,seed,"
    "fpr,fpr_se,power,power_se,type_s,type_s_se,reward,reward_se,"
    "prop_opt,prop_opt_se,prop_sup,prop_sup_se";

std::optional<TableFormat> table_format_from_string(const std::string& name) {
  if (name == "csv") return TableFormat::Csv;
  if (name == "md") return TableFormat::Markdown;
  if (name == "json") return TableFormat::Json;
  return std::nullopt;
}

ReportRow make_report_row(const ExperimentConfig& config,
                          const MetricsSummary& summary) {
  ReportRow row;
  row.policy = to_string(config.policy.kind);
  row.params = policy_param_string(config.policy);
  row.effect_size = config.effect_size;
  row.n = config.n;
  row.n_sims = config.n_sims;
  row.seed = config.base_seed;
  if (summary.is_power) {
    row.power = summary.rejection_rate.value;
    row.power_se = summary.rejection_rate.se;
    row.type_s = summary.type_s.value;
    row.type_s_se = summary.type_s.se;
    if (summary.prop_opt) {
      row.prop_opt = summary.prop_opt->value;
      row.prop_opt_se = summary.prop_opt->se;
    }
  } else {
    row.fpr = summary.rejection_rate.value;
    row.fpr_se = summary.rejection_rate.se;
  }
  row.reward = summary.reward.value;
  row.reward_se = summary.reward.se;
  row.prop_sup = summary.prop_sup.value;
  row.prop_sup_se = summary.prop_sup.se;
  return row;
}

namespace {

std::string full_precision(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_cell(const std::optional<double>& v) {
  return v ? full_precision(*v) : std::string();
}

// Paper-style cell: value to 3 decimals with SE in parentheses.
std::string md_cell(const std::optional<double>& v,
                    const std::optional<double>& se) {
  if (!v) return "";
  char buf[48];
  if (se) {
    std::snprintf(buf, sizeof(buf), "%.3f (%.3f)", *v, *se);
  } else {
    std::snprintf(buf, sizeof(buf), "%.3f", *v);
  }
  return buf;
}

std::vector<std::pair<const char*,
                      std::pair<std::optional<double> ReportRow::*,
                                std::optional<double> ReportRow::*>>>
metric_columns() {
  return {
      {"fpr", {&ReportRow::fpr, &ReportRow::fpr_se}},
      {"power", {&ReportRow::power, &ReportRow::power_se}},
      {"type_s", {&ReportRow::type_s, &ReportRow::type_s_se}},
      {"reward", {&ReportRow::reward, &ReportRow::reward_se}},
      {"prop_opt", {&ReportRow::prop_opt, &ReportRow::prop_opt_se}},
      {"prop_sup", {&ReportRow::prop_sup, &ReportRow::prop_sup_se}},
  };
}

std::string emit_csv(std::span<const ReportRow> rows) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& r : rows) {
    out << r.policy << "," << r.params << "," << full_precision(r.effect_size)
        << "," << r.n << "," << r.n_sims << "," << r.seed;
    for (const auto& [name, members] : metric_columns()) {
      out << "," << csv_cell(r.*(members.first)) << ","
          << csv_cell(r.*(members.second));
    }
    out << "\n";
  }
  return out.str();
}

std::string emit_markdown(std::span<const ReportRow> rows) {
  std::ostringstream out;
  out << "| policy | params | effect_size | n | FPR | Power | Type S | "
         "Reward | Prop. Opt. | Prop. Sup. |\n";
  out << "|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    char w[16];
    std::snprintf(w, sizeof(w), "%g", r.effect_size);
    out << "| " << r.policy << " | " << r.params << " | " << w << " | " << r.n
        << " | " << md_cell(r.fpr, r.fpr_se) << " | "
        << md_cell(r.power, r.power_se) << " | "
        << md_cell(r.type_s, r.type_s_se) << " | "
        << md_cell(r.reward, r.reward_se) << " | "
        << md_cell(r.prop_opt, r.prop_opt_se) << " | "
        << md_cell(r.prop_sup, r.prop_sup_se) << " |\n";
  }
  return out.str();
}

std::string emit_json(std::span<const ReportRow> rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json j;
    j["policy"] = r.policy;
    j["params"] = r.params;
    j["effect_size"] = r.effect_size;
    j["n"] = r.n;
    j["n_sims"] = r.n_sims;
    j["seed"] = r.seed;
    for (const auto& [name, members] : metric_columns()) {
      if (r.*(members.first)) {
        j[name] = *(r.*(members.first));
        j[std::string(name) + "_se"] = *(r.*(members.second));
      }
    }
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::string emit_table(std::span<const ReportRow> rows, TableFormat format) {
  if (rows.empty()) throw std::invalid_argument("emit_table: no rows");
  switch (format) {
    case TableFormat::Csv: return emit_csv(rows);
    case TableFormat::Markdown: return emit_markdown(rows);
    case TableFormat::Json: return emit_json(rows);
  }
  throw std::logic_error("unreachable table format");
}

std::vector<ReportRow> parse_csv_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::invalid_argument("parse_csv_table: missing or unknown header");
  }
  auto parse_opt = [](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    return std::stod(s);
  };
  std::vector<ReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != 18) {
      throw std::invalid_argument("parse_csv_table: bad column count");
    }
    ReportRow r;
    r.policy = cells[0];
    r.params = cells[1];
    r.effect_size = std::stod(cells[2]);
    r.n = std::stol(cells[3]);
    r.n_sims = std::stol(cells[4]);
    r.seed = std::stoull(cells[5]);
    std::size_t i = 6;
    for (const auto& [name, members] : metric_columns()) {
      r.*(members.first) = parse_opt(cells[i++]);
      r.*(members.second) = parse_opt(cells[i++]);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace bandit
