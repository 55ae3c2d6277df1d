#include <stdexcept>
#include <string>

#include <doctest.h>

#include "bandit/report.hpp"

using namespace bandit;

namespace {

ReportRow null_row() {
  ReportRow r;
  r.policy = "ur";
  r.params = "";
  r.effect_size = 0.0;
  r.n = 785;
  r.n_sims = 10000;
  r.seed = 7;
  r.fpr = 0.055;
  r.fpr_se = 0.002;
  r.reward = 0.5001234;
  r.reward_se = 0.0005;
  r.prop_sup = 0.500;
  r.prop_sup_se = 0.005;
  return r;
}

}  // namespace

TEST_CASE("csv header is stable") {
  CHECK(std::string(kCsvHeader) ==
        "policy,params,effect_size,n,n_sims,seed,"
        "fpr,fpr_se,power,power_se,type_s,type_s_se,reward,reward_se,"
        "prop_opt,prop_opt_se,prop_sup,prop_sup_se");
  auto csv = emit_table(std::vector<ReportRow>{null_row()}, TableFormat::Csv);
  CHECK(csv.substr(0, csv.find('\n')) == kCsvHeader);
}

TEST_CASE("markdown cells use value (se) style") {
  auto md =
      emit_table(std::vector<ReportRow>{null_row()}, TableFormat::Markdown);
  CHECK(md.find("0.055 (0.002)") != std::string::npos);
  CHECK(md.find("0.500 (0.001)") != std::string::npos);  // reward to 3 decimals
}

TEST_CASE("absent metrics render as empty cells, not zeros") {
  auto csv = emit_table(std::vector<ReportRow>{null_row()}, TableFormat::Csv);
  auto data_line = csv.substr(csv.find('\n') + 1);
  // power, power_se, type_s, type_s_se, prop_opt, prop_opt_se are unset.
  CHECK(data_line.find(",,,,") != std::string::npos);
  CHECK(data_line.find(",0,0,") == std::string::npos);
}

TEST_CASE("csv round-trip preserves full precision") {
  ReportRow a = null_row();
  a.reward = 0.53612345678901234;
  ReportRow b;
  b.policy = "ts-postdiff";
  b.params = "c=0.1";
  b.effect_size = 0.1;
  b.n = 785;
  b.n_sims = 10000;
  b.seed = 20210913;
  b.power = 0.775;
  b.power_se = 0.004;
  b.type_s = 0.0;
  b.type_s_se = 0.0;
  b.reward = 0.524;
  b.reward_se = 0.0004;
  b.prop_opt = 0.738;
  b.prop_opt_se = 0.003;
  b.prop_sup = 0.557;
  b.prop_sup_se = 0.005;

  std::vector<ReportRow> rows{a, b};
  auto parsed = parse_csv_table(emit_table(rows, TableFormat::Csv));
  REQUIRE(parsed.size() == 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(parsed[i].policy == rows[i].policy);
    CHECK(parsed[i].params == rows[i].params);
    CHECK(parsed[i].effect_size == rows[i].effect_size);
    CHECK(parsed[i].n == rows[i].n);
    CHECK(parsed[i].seed == rows[i].seed);
    CHECK(parsed[i].fpr == rows[i].fpr);
    CHECK(parsed[i].power == rows[i].power);
    CHECK(parsed[i].reward == rows[i].reward);
    CHECK(parsed[i].prop_opt == rows[i].prop_opt);
    CHECK(parsed[i].prop_sup == rows[i].prop_sup);
  }
}

TEST_CASE("json output carries only the metrics present") {
  auto text = emit_table(std::vector<ReportRow>{null_row()}, TableFormat::Json);
  CHECK(text.find("\"fpr\"") != std::string::npos);
  CHECK(text.find("\"power\"") == std::string::npos);
}

TEST_CASE("emit_table rejects an empty row list") {
  CHECK_THROWS_AS(emit_table(std::vector<ReportRow>{}, TableFormat::Csv),
                  std::invalid_argument);
}
