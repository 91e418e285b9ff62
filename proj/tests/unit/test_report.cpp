#include <gtest/gtest.h>

#include <fstream>

#include "cuba/report.hpp"
#include "oracles.hpp"

using namespace cuba;

namespace {

nlohmann::json golden(const std::string &name) {
  std::ifstream in(std::string(CUBA_GOLDEN_DIR) + "/" + name);
  return nlohmann::json::parse(in);
}

RunReport fig1_check_report() {
  auto in = oracle::load_fixture("fig1.cpds");
  auto r = cuba::cuba(in.cpds, in.property, Budgets{});
  RunReport rep;
  rep.command = "check";
  rep.input = "fig1.cpds";
  rep.verdict = summarize(in.cpds, r.verdict);
  rep.table = table_rows(in.cpds, r.verdict.visible_deltas);
  rep.fcr = summarize(in.cpds, fcr_check(in.cpds));
  return rep;
}

nlohmann::json stable(nlohmann::json j) {
  j.erase("timings");
  j.erase("peak_rss_kb");
  return j;
}

}  // namespace

TEST(Report, CheckJsonMatchesGolden) {
  auto j = stable(to_json(fig1_check_report()));
  EXPECT_EQ(j, golden("fig1_check.json")) << j.dump(2);
}

TEST(Report, KeysArePinned) {
  auto rep = fig1_check_report();
  rep.timings["total"] = 0.5;
  rep.peak_rss_kb = 1024;
  auto j = to_json(rep);
  std::set<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.insert(it.key());
  const std::set<std::string> want{"schema_version", "command", "input", "verdict",
                                   "table", "fcr", "timings", "budgets", "peak_rss_kb"};
  for (const auto &k : want) EXPECT_TRUE(keys.count(k)) << k;
  EXPECT_EQ(j["schema_version"], kReportSchemaVersion);
  EXPECT_EQ(j["timings"]["total"], 0.5);
}

TEST(Report, HumanRendering) {
  auto text = render_human(fig1_check_report());
  EXPECT_NE(text.find("safe for any resource amount"), std::string::npos) << text;
  EXPECT_NE(text.find("FCR: yes"), std::string::npos) << text;
  EXPECT_NE(text.find("plateau at k = 2 rejected by the generator test"), std::string::npos)
      << text;
}

TEST(Report, Messages) {
  VerdictSummary v;
  v.outcome = "unsafe";
  v.k = 2;
  EXPECT_EQ(verdict_message(v), "error reachable with resource amount 2");
  v.outcome = "safe";
  EXPECT_EQ(verdict_message(v), "safe for any resource amount");
  v.outcome = "inconclusive";
  v.reason = "budget";
  v.k = 3;
  EXPECT_EQ(verdict_message(v), "inconclusive (budget) after k = 3");
}

TEST(Report, ApproxSummary) {
  auto in = oracle::load_fixture("fig1.cpds");
  auto a = summarize_approx(in.cpds);
  EXPECT_EQ(a.z.size(), 8u);
  EXPECT_EQ(a.spec.size(), 2u);
}
