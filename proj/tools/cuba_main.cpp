// Command-line front end: check, table, fcr, approx.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cuba/engine.hpp"
#include "cuba/report.hpp"
#include "cuba/textfmt.hpp"

using namespace cuba;

namespace {

enum Exit { kSafe = 0, kUnsafe = 1, kInconclusive = 2, kInputError = 3 };

struct Options {
  std::string file;
  std::size_t max_k = 20;
  double closure_budget = 1e6;
  double layer_budget = 1e4;
  double timeout = 1800;
  std::string method = "cuba";
  std::string backend = "auto";
  std::string json_path;
  std::string dot_path;
  bool quiet = false;
  bool visible_only = false;

  Budgets budgets() const {
    Budgets b;
    b.max_k = max_k;
    b.closure_states = static_cast<std::size_t>(closure_budget);
    b.layer_states = static_cast<std::size_t>(layer_budget);
    b.timeout_seconds = timeout;
    return b;
  }
};

class Stopwatch {
 public:
  double lap() {
    auto now = std::chrono::steady_clock::now();
    double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

std::optional<ParsedInput> load(const std::string &file) {
  try {
    return parse_cpds_file(file);
  } catch (const SyntaxError &e) {
    const auto &d = e.diagnostic();
    std::cerr << file << ':' << d.line << ':' << d.column << ": " << d.message
              << '\n';
  } catch (const ValidationError &e) {
    for (const auto &d : e.diagnostics())
      std::cerr << file << ": " << d.location << ": " << d.message << '\n';
  } catch (const InputError &e) {
    std::cerr << file << ": " << e.what() << '\n';
  }
  return std::nullopt;
}

int emit(const Options &o, RunReport &r, int code) {
  r.budgets = o.budgets();
  r.peak_rss_kb = peak_rss_kb();
  if (!o.quiet) std::cout << render_human(r);
  if (o.json_path == "-") {
    std::cout << to_json(r).dump(2) << '\n';
  } else if (!o.json_path.empty()) {
    std::ofstream out(o.json_path);
    if (!out) {
      std::cerr << "cannot write '" << o.json_path << "'\n";
      return kInputError;
    }
    out << to_json(r).dump(2) << '\n';
  }
  return code;
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::safe: return kSafe;
    case Outcome::unsafe: return kUnsafe;
    default: return kInconclusive;
  }
}

std::optional<Backend> parse_backend(const std::string &s) {
  if (s == "explicit") return Backend::explicit_states;
  if (s == "symbolic") return Backend::symbolic;
  return std::nullopt;
}

int cmd_check(const Options &o) {
  auto in = load(o.file);
  if (!in) return kInputError;
  RunReport r;
  r.command = "check";
  r.input = o.file;
  Stopwatch sw;
  const Budgets b = o.budgets();
  const auto forced = parse_backend(o.backend);

  Verdict v;
  if (o.method == "cuba") {
    CubaResult res = cuba::cuba(in->cpds, in->property, b, forced);
    r.timings["analysis"] = sw.lap();
    v = std::move(res.verdict);
  } else {
    FcrResult f = fcr_check(in->cpds, true);
    r.fcr = summarize(in->cpds, f);
    r.timings["fcr"] = sw.lap();
    const Backend be =
        forced ? *forced : (f.holds ? Backend::explicit_states : Backend::symbolic);
    v = o.method == "alg3" ? alg3(in->cpds, in->property, be, b)
                           : scheme1(in->cpds, in->property, be, b);
    r.timings["analysis"] = sw.lap();
  }
  r.table = table_rows(in->cpds, v.visible_deltas);
  r.verdict = summarize(in->cpds, v);
  return emit(o, r, exit_code(v.outcome));
}

int cmd_table(const Options &o) {
  auto in = load(o.file);
  if (!in) return kInputError;
  RunReport r;
  r.command = "table";
  r.input = o.file;
  Stopwatch sw;
  const Budgets b = o.budgets();
  const auto forced = parse_backend(o.backend);

  bool symbolic = forced == Backend::symbolic;
  if (o.visible_only && !forced) {
    symbolic = !fcr_check(in->cpds).holds;
    r.timings["fcr"] = sw.lap();
  }
  if (!symbolic) {
    ReachTable t = build_table(in->cpds, b.max_k, b.closure_states);
    r.table = table_rows(in->cpds, t);
    r.table_has_states = !o.visible_only;
    if (o.visible_only)
      for (auto &row : r.table) row.states.clear();
    r.table_complete = t.complete;
    r.table_note = t.note;
  } else {
    SymbolicExplorer ex(in->cpds, b.layer_states);
    try {
      while (ex.k() < b.max_k) ex.advance();
    } catch (const BudgetExhausted &e) {
      r.table_complete = false;
      r.table_note = std::string(e.what()) + " at bound " + std::to_string(ex.k() + 1);
    }
    std::vector<std::vector<VisibleState>> deltas;
    for (const auto &l : ex.layers()) deltas.push_back(l.visible_delta);
    r.table = table_rows(in->cpds, deltas);
  }
  r.timings["table"] = sw.lap();
  return emit(o, r, r.table_complete ? kSafe : kInconclusive);
}

int cmd_fcr(const Options &o) {
  auto in = load(o.file);
  if (!in) return kInputError;
  RunReport r;
  r.command = "fcr";
  r.input = o.file;
  Stopwatch sw;
  FcrResult f = fcr_check(in->cpds, true);
  r.timings["fcr"] = sw.lap();
  r.fcr = summarize(in->cpds, f);
  if (!o.dot_path.empty()) {
    std::ofstream out(o.dot_path);
    if (!out) {
      std::cerr << "cannot write '" << o.dot_path << "'\n";
      return kInputError;
    }
    for (std::size_t i = 0; i < f.threads.size(); ++i) {
      const Psa &p = *f.threads[i].saturated;
      const auto &c = in->cpds;
      out << to_dot(
          p.graph(),
          [&](StateId s) {
            if (s < p.shared_count()) return c.shared[s];
            if (s == p.final_state()) return std::string("F");
            return "s" + std::to_string(s);
          },
          [&](Label l) {
            return l == p.bottom() ? std::string("bot") : c.threads[i].symbols[l];
          });
    }
  }
  return emit(o, r, kSafe);
}

int cmd_approx(const Options &o) {
  auto in = load(o.file);
  if (!in) return kInputError;
  RunReport r;
  r.command = "approx";
  r.input = o.file;
  Stopwatch sw;
  r.approx = summarize_approx(in->cpds);
  r.timings["approx"] = sw.lap();
  return emit(o, r, kSafe);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Context-unbounded safety checker for concurrent pushdown systems"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App *sub) {
    sub->add_option("file", o.file, "CPDS input file")->required();
    sub->add_option("--max-k", o.max_k, "largest context bound explored")
        ->capture_default_str();
    sub->add_option("--closure-budget", o.closure_budget,
                    "state budget per single-thread closure")
        ->capture_default_str();
    sub->add_option("--layer-budget", o.layer_budget,
                    "symbolic state budget per bound")
        ->capture_default_str();
    sub->add_option("--timeout", o.timeout, "wall-clock limit in seconds")
        ->capture_default_str();
    sub->add_option("--backend", o.backend, "auto, explicit or symbolic")
        ->check(CLI::IsMember({"auto", "explicit", "symbolic"}))
        ->capture_default_str();
    sub->add_option("--json", o.json_path, "write a JSON report to PATH (- for stdout)");
    sub->add_flag("--quiet", o.quiet, "no output on stdout");
  };

  auto *check = app.add_subcommand("check", "decide the property for every bound");
  common(check);
  check->add_option("--method", o.method, "cuba, alg3 or scheme1")
      ->check(CLI::IsMember({"cuba", "alg3", "scheme1"}))
      ->capture_default_str();

  auto *table = app.add_subcommand("table", "print states new at each bound");
  common(table);
  table->add_flag("--visible-only", o.visible_only,
                  "visible states only; symbolic when FCR fails");

  auto *fcr = app.add_subcommand("fcr", "check finite context reachability");
  common(fcr);
  fcr->add_option("--dot", o.dot_path, "write the saturated automata as dot");

  auto *approx = app.add_subcommand("approx", "print Z and the generator set");
  common(approx);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  if (*check) return cmd_check(o);
  if (*table) return cmd_table(o);
  if (*fcr) return cmd_fcr(o);
  return cmd_approx(o);
}
