#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cuba/engine.hpp"

namespace cuba {

inline constexpr int kReportSchemaVersion = 1;

struct VerdictSummary {
  std::string outcome;
  std::string method;
  std::size_t k = 0;
  std::size_t round = 0;
  std::string witness;
  std::vector<std::string> path;
  std::string reason;
  std::string detail;
  std::vector<std::size_t> rejected_plateaus;
};

struct TableRow {
  std::size_t k = 0;
  std::vector<std::string> states;  // empty when only visible states are known
  std::vector<std::string> visible;
};

struct ThreadFcrSummary {
  std::string thread;
  bool loop_free = true;
  std::string cycle;
  std::size_t automaton_states = 0;
  std::size_t automaton_transitions = 0;
};

struct FcrSummary {
  bool holds = true;
  std::vector<ThreadFcrSummary> threads;
};

struct ApproxSummary {
  std::vector<std::string> z;
  std::vector<std::string> generators;  // enumerated G
  std::vector<std::string> reachable_generators;  // G intersected with Z
  std::vector<std::string> spec;  // one line per thread
};

struct RunReport {
  std::string command;
  std::string input;
  std::optional<VerdictSummary> verdict;
  std::vector<TableRow> table;
  bool table_has_states = false;
  bool table_complete = true;
  std::string table_note;
  std::optional<FcrSummary> fcr;
  std::optional<ApproxSummary> approx;
  std::map<std::string, double> timings;  // seconds per phase
  Budgets budgets;
  std::optional<long> peak_rss_kb;
};

VerdictSummary summarize(const Cpds &c, const Verdict &v);
FcrSummary summarize(const Cpds &c, const FcrResult &f);
ApproxSummary summarize_approx(const Cpds &c);

std::vector<TableRow> table_rows(const Cpds &c, const ReachTable &t);
std::vector<TableRow> table_rows(
    const Cpds &c, const std::vector<std::vector<VisibleState>> &visible_deltas);

/// Short human phrase for a verdict.
std::string verdict_message(const VerdictSummary &v);

std::string render_human(const RunReport &r);
nlohmann::json to_json(const RunReport &r);

/// Peak resident set size of this process, where the platform reports it.
std::optional<long> peak_rss_kb();

}  // namespace cuba
