#include "cuba/engine.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>

namespace cuba {

FcrResult fcr_check(const Cpds &c, bool keep_automata) {
  FcrResult r;
  for (std::size_t i = 0; i < c.thread_count(); ++i) {
    const auto &t = c.threads[i];
    SaturationResult sat =
        post_star(t, initial_psa_short_stacks(c.shared_count(), t.alphabet_size()));
    ThreadFcrEvidence ev;
    ev.cycle = find_accepting_cycle(sat.psa.graph());
    ev.loop_free = !ev.cycle.has_value();
    ev.automaton_states = sat.psa.graph().state_count();
    ev.automaton_transitions = sat.psa.graph().transition_count();
    if (keep_automata) ev.saturated = std::move(sat.psa);
    r.holds = r.holds && ev.loop_free;
    r.threads.push_back(std::move(ev));
  }
  return r;
}

std::string describe_cycle(const Cpds &c, std::size_t thread, const Psa &psa,
                           const std::vector<Transition> &cycle) {
  auto state = [&](StateId s) -> std::string {
    if (s < psa.shared_count()) return c.shared[s];
    if (s == psa.final_state()) return "F";
    return "s" + std::to_string(s);
  };
  auto label = [&](Label l) -> std::string {
    if (l == kEpsLabel) return "eps";
    if (l == psa.bottom()) return "bot";
    return c.threads[thread].symbols.at(l);
  };
  std::string out;
  for (const auto &t : cycle) {
    if (out.empty()) out = state(t.from);
    out += " -" + label(t.label) + "-> " + state(t.to);
  }
  return out;
}

namespace {

// One bound of a layered exploration, seen through visible states.
struct Round {
  const std::vector<VisibleState> *visible_delta;
  // Set by the explicit backend: a concrete state matching the property.
  std::optional<Path> path;
  std::optional<VisibleState> bad;
};

Verdict run_alg3(const std::set<VisibleState> &gz,
                 const Budgets &b, const RunControl &ctl, Method method,
                 const std::function<Round(std::size_t)> &step,
                 const std::function<const std::set<VisibleState> &()> &seen) {
  Verdict v;
  v.method = method;
  Round r0 = step(0);
  v.visible_deltas.push_back(*r0.visible_delta);
  if (r0.bad) {
    v.outcome = Outcome::unsafe;
    v.witness = r0.bad;
    v.path = std::move(r0.path);
    return v;
  }
  for (std::size_t k = 1;; ++k) {
    if (k > b.max_k) {
      v.reason = StopReason::max_k;
      break;
    }
    if (auto why = ctl.check(k); why != StopReason::none) {
      v.reason = why;
      break;
    }
    Round r;
    try {
      r = step(k);
    } catch (const BudgetExhausted &e) {
      v.reason = StopReason::budget;
      v.detail = e.what();
      break;
    }
    v.round = k;
    v.visible_deltas.push_back(*r.visible_delta);
    if (r.bad) {
      v.outcome = Outcome::unsafe;
      v.k = k;
      v.witness = r.bad;
      v.path = std::move(r.path);
      return v;
    }
    // New plateau: T(R_{k-2}) < T(R_{k-1}) = T(R_k), with T(R_{-1}) empty.
    const bool plateau = v.visible_deltas[k].empty() && !v.visible_deltas[k - 1].empty();
    if (!plateau) continue;
    const auto &t = seen();
    const bool covered = std::all_of(gz.begin(), gz.end(), [&](const VisibleState &g) {
      return t.count(g) != 0;
    });
    if (covered) {
      v.outcome = Outcome::safe;
      v.k = k - 1;
      return v;
    }
    v.rejected_plateaus.push_back(k - 1);
  }
  v.outcome = Outcome::inconclusive;
  v.k = v.round;
  return v;
}

}  // namespace

Verdict alg3(const Cpds &c, const PropertySpec &prop, Backend backend,
             const Budgets &b, const RunControl *ctl) {
  RunControl local(b.timeout_seconds);
  const RunControl &rc = ctl ? *ctl : local;
  const auto gz = reachable_generators_upper(c);

  if (backend == Backend::explicit_states) {
    ExplicitExplorer ex(c, b.closure_states);
    auto step = [&](std::size_t k) {
      const ReachLayer &l = k == 0 ? ex.layer(0) : ex.advance();
      Round r{&l.visible_delta, std::nullopt, std::nullopt};
      for (const auto &s : l.delta) {
        if (!matches(prop, visible(s))) continue;
        r.bad = visible(s);
        r.path = ex.witness(s);
        break;
      }
      return r;
    };
    auto seen = [&]() -> const std::set<VisibleState> & {
      return ex.visible_states();
    };
    return run_alg3(gz, b, rc, Method::alg3_explicit, step, seen);
  }

  SymbolicExplorer ex(c, b.layer_states);
  auto step = [&](std::size_t k) {
    const SymbolicLayer &l = k == 0 ? ex.layer(0) : ex.advance();
    Round r{&l.visible_delta, std::nullopt, std::nullopt};
    for (const auto &v : l.visible_delta)
      if (matches(prop, v)) {
        r.bad = v;
        break;
      }
    return r;
  };
  auto seen = [&]() -> const std::set<VisibleState> & {
    return ex.visible_states();
  };
  return run_alg3(gz, b, rc, Method::alg3_symbolic, step, seen);
}

Verdict scheme1(const Cpds &c, const PropertySpec &prop, Backend backend,
                const Budgets &b, const RunControl *ctl) {
  if (backend == Backend::explicit_states)
    return scheme1_explicit(c, prop, b, ctl);
  return scheme1_symbolic(c, prop, b, ctl);
}

Verdict arbitrate(const Verdict &a, const Verdict &s) {
  const bool ca = a.outcome != Outcome::inconclusive;
  const bool cs = s.outcome != Outcome::inconclusive;
  if (!ca && !cs) return a;
  if (ca != cs) return ca ? a : s;
  const bool ua = a.outcome == Outcome::unsafe;
  const bool us = s.outcome == Outcome::unsafe;
  if (ua && us) return s.k < a.k ? s : a;
  if (ua || us) return ua ? a : s;
  return s.round < a.round ? s : a;
}

namespace {

Verdict guarded(const std::function<Verdict()> &f, Method m) {
  try {
    return f();
  } catch (const std::exception &e) {
    Verdict v;
    v.method = m;
    v.reason = StopReason::budget;
    v.detail = e.what();
    return v;
  }
}

}  // namespace

CubaResult cuba(const Cpds &c, const PropertySpec &prop, const Budgets &b,
                std::optional<Backend> force) {
  CubaResult res;
  res.fcr = fcr_check(c).holds;
  RunControl ctl(b.timeout_seconds);
  const Backend backend =
      force ? *force : (res.fcr ? Backend::explicit_states : Backend::symbolic);

  if (backend == Backend::symbolic) {
    res.verdict = guarded(
        [&] { return alg3(c, prop, Backend::symbolic, b, &ctl); },
        Method::alg3_symbolic);
    res.workers.push_back(res.verdict);
    return res;
  }

  // A worker that concludes at round r lets the other finish rounds <= r
  // only, so the arbitrated result does not depend on thread timing.
  Verdict va, vs;
  auto conclude = [&](const Verdict &v) {
    if (v.outcome != Outcome::inconclusive) ctl.limit_rounds(v.round);
  };
  std::thread ta([&] {
    va = guarded([&] { return alg3(c, prop, Backend::explicit_states, b, &ctl); },
                 Method::alg3_explicit);
    conclude(va);
  });
  std::thread ts([&] {
    vs = guarded([&] { return scheme1_explicit(c, prop, b, &ctl); },
                 Method::scheme1_explicit);
    conclude(vs);
  });
  ta.join();
  ts.join();
  res.workers = {va, vs};
  res.verdict = arbitrate(va, vs);
  return res;
}

}  // namespace cuba
