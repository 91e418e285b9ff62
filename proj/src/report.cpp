#include "cuba/report.hpp"

#include <sstream>

#include <sys/resource.h>

namespace cuba {

namespace {

std::string join(const std::vector<std::string> &xs, const std::string &sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

template <class Range>
std::vector<std::string> visible_names(const Cpds &c, const Range &vs) {
  std::vector<std::string> out;
  for (const auto &v : vs) out.push_back(format_visible(c, v));
  return out;
}

}  // namespace

VerdictSummary summarize(const Cpds &c, const Verdict &v) {
  VerdictSummary s;
  s.outcome = to_string(v.outcome);
  s.method = to_string(v.method);
  s.k = v.k;
  s.round = v.round;
  if (v.witness) s.witness = format_visible(c, *v.witness);
  if (v.path) {
    s.path.push_back(format_state(c, v.path->initial));
    for (const auto &st : v.path->steps)
      s.path.push_back(c.threads[st.thread].name + ": " +
                       format_action(c, st.thread,
                                     c.threads[st.thread].actions[st.action]) +
                       "  " + format_state(c, st.state));
  }
  if (v.outcome == Outcome::inconclusive) s.reason = to_string(v.reason);
  s.detail = v.detail;
  s.rejected_plateaus = v.rejected_plateaus;
  return s;
}

FcrSummary summarize(const Cpds &c, const FcrResult &f) {
  FcrSummary s;
  s.holds = f.holds;
  for (std::size_t i = 0; i < f.threads.size(); ++i) {
    const auto &t = f.threads[i];
    ThreadFcrSummary ts;
    ts.thread = c.threads[i].name;
    ts.loop_free = t.loop_free;
    ts.automaton_states = t.automaton_states;
    ts.automaton_transitions = t.automaton_transitions;
    if (t.cycle && t.saturated)
      ts.cycle = describe_cycle(c, i, *t.saturated, *t.cycle);
    s.threads.push_back(std::move(ts));
  }
  return s;
}

ApproxSummary summarize_approx(const Cpds &c) {
  ApproxSummary s;
  const auto z = compute_Z(c);
  const auto g = generator_spec(c);
  s.z = visible_names(c, z);
  s.generators = visible_names(c, enumerate_generators(c, g));
  s.reachable_generators = visible_names(c, reachable_generators_upper(g, z));
  for (std::size_t i = 0; i < c.thread_count(); ++i) {
    std::vector<std::string> pops, em;
    for (auto q : g.pop_targets[i]) pops.push_back(c.shared[q]);
    for (auto x : g.emerge[i]) em.push_back(c.threads[i].symbols[x]);
    s.spec.push_back(c.threads[i].name + ": pop targets {" + join(pops, ", ") +
                     "}, emerging {" + join(em, ", ") + "}");
  }
  return s;
}

std::vector<TableRow> table_rows(const Cpds &c, const ReachTable &t) {
  std::vector<TableRow> rows;
  for (const auto &l : t.layers) {
    TableRow r;
    r.k = l.k;
    for (const auto &s : l.delta) r.states.push_back(format_state(c, s));
    r.visible = visible_names(c, l.visible_delta);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<TableRow> table_rows(
    const Cpds &c, const std::vector<std::vector<VisibleState>> &deltas) {
  std::vector<TableRow> rows;
  for (std::size_t k = 0; k < deltas.size(); ++k)
    rows.push_back({k, {}, visible_names(c, deltas[k])});
  return rows;
}

std::string verdict_message(const VerdictSummary &v) {
  if (v.outcome == "safe") return "safe for any resource amount";
  if (v.outcome == "unsafe")
    return "error reachable with resource amount " + std::to_string(v.k);
  return "inconclusive (" + v.reason + ") after k = " + std::to_string(v.k);
}

std::string render_human(const RunReport &r) {
  std::ostringstream os;
  if (!r.table.empty()) {
    os << (r.table_has_states ? "k | new states | new visible states\n"
                              : "k | new visible states\n");
    for (const auto &row : r.table) {
      os << row.k << " | ";
      if (r.table_has_states)
        os << (row.states.empty() ? "-" : join(row.states, " ")) << " | ";
      os << (row.visible.empty() ? "-" : join(row.visible, " ")) << '\n';
    }
    if (!r.table_complete) os << "table incomplete: " << r.table_note << '\n';
  }
  if (r.fcr) {
    os << "FCR: " << (r.fcr->holds ? "yes" : "no") << '\n';
    for (const auto &t : r.fcr->threads) {
      os << "  thread " << t.thread << ": "
         << (t.loop_free ? "loop-free" : "cycle") << " (" << t.automaton_states
         << " states, " << t.automaton_transitions << " transitions)";
      if (!t.cycle.empty()) os << "\n    " << t.cycle;
      os << '\n';
    }
  }
  if (r.approx) {
    os << "Z (" << r.approx->z.size() << "): " << join(r.approx->z, " ") << '\n';
    for (const auto &line : r.approx->spec) os << "generator spec " << line << '\n';
    os << "G (" << r.approx->generators.size()
       << "): " << join(r.approx->generators, " ") << '\n';
    os << "G & Z (" << r.approx->reachable_generators.size()
       << "): " << join(r.approx->reachable_generators, " ") << '\n';
  }
  if (r.verdict) {
    const auto &v = *r.verdict;
    os << verdict_message(v) << '\n';
    os << "  method " << v.method << ", k = " << v.k << ", rounds = " << v.round
       << '\n';
    for (auto p : v.rejected_plateaus)
      os << "  plateau at k = " << p << " rejected by the generator test\n";
    if (!v.witness.empty()) os << "  witness " << v.witness << '\n';
    if (!v.path.empty()) {
      os << "  path:\n";
      for (const auto &p : v.path) os << "    " << p << '\n';
    }
    if (!v.detail.empty()) os << "  " << v.detail << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const RunReport &r) {
  using nlohmann::json;
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["command"] = r.command;
  j["input"] = r.input;
  if (r.verdict) {
    const auto &v = *r.verdict;
    j["verdict"] = {{"outcome", v.outcome},
                    {"message", verdict_message(v)},
                    {"method", v.method},
                    {"k", v.k},
                    {"rounds", v.round},
                    {"witness", v.witness},
                    {"path", v.path},
                    {"reason", v.reason},
                    {"detail", v.detail},
                    {"rejected_plateaus", v.rejected_plateaus}};
  } else {
    j["verdict"] = nullptr;
  }
  json rows = json::array();
  for (const auto &row : r.table) {
    json jr = {{"k", row.k}, {"visible", row.visible}};
    if (r.table_has_states) jr["states"] = row.states;
    rows.push_back(std::move(jr));
  }
  j["table"] = {{"rows", rows}, {"complete", r.table_complete}, {"note", r.table_note}};
  if (r.fcr) {
    json threads = json::array();
    for (const auto &t : r.fcr->threads)
      threads.push_back({{"thread", t.thread},
                         {"loop_free", t.loop_free},
                         {"cycle", t.cycle},
                         {"automaton_states", t.automaton_states},
                         {"automaton_transitions", t.automaton_transitions}});
    j["fcr"] = {{"holds", r.fcr->holds}, {"threads", threads}};
  } else {
    j["fcr"] = nullptr;
  }
  if (r.approx) {
    j["approx"] = {{"z_size", r.approx->z.size()},
                   {"g_size", r.approx->generators.size()},
                   {"g_and_z_size", r.approx->reachable_generators.size()},
                   {"z", r.approx->z},
                   {"g", r.approx->generators},
                   {"g_and_z", r.approx->reachable_generators}};
  } else {
    j["approx"] = nullptr;
  }
  j["timings"] = r.timings;
  j["budgets"] = {{"max_k", r.budgets.max_k},
                  {"closure_states", r.budgets.closure_states},
                  {"layer_states", r.budgets.layer_states},
                  {"timeout_seconds", r.budgets.timeout_seconds}};
  j["peak_rss_kb"] = r.peak_rss_kb ? json(*r.peak_rss_kb) : json(nullptr);
  return j;
}

std::optional<long> peak_rss_kb() {
  struct rusage ru {};
  if (getrusage(RUSAGE_SELF, &ru) != 0) return std::nullopt;
  return static_cast<long>(ru.ru_maxrss);
}

}  // namespace cuba
