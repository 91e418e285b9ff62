#include "cuba/approx.hpp"

#include <deque>

namespace cuba {

ThreadAbstraction build_abstraction(const ThreadProgram &p) {
  ThreadAbstraction a;
  for (const auto &act : p.actions)
    if (act.kind() == ActionKind::push && act.rhs.size() == 2)
      a.emerging.insert(act.rhs[1]);
  for (const auto &act : p.actions) {
    const ShortState from{act.src, act.top};
    a.transitions.insert({from, {act.dst, top_of(act.rhs)}});
    if (act.rhs.empty())
      for (auto rho : a.emerging) a.transitions.insert({from, {act.dst, rho}});
  }
  return a;
}

std::set<VisibleState> compute_Z(const Cpds &c) {
  std::vector<ThreadAbstraction> abs;
  for (const auto &t : c.threads) abs.push_back(build_abstraction(t));

  std::set<VisibleState> z;
  std::deque<VisibleState> work;
  const VisibleState init = visible(initial_state(c));
  z.insert(init);
  work.push_back(init);
  while (!work.empty()) {
    const VisibleState v = work.front();
    work.pop_front();
    for (std::size_t i = 0; i < abs.size(); ++i) {
      const ShortState from{v.q, v.tops[i]};
      for (auto it = abs[i].transitions.lower_bound({from, {0, 0}});
           it != abs[i].transitions.end() && it->from == from; ++it) {
        VisibleState next = v;
        next.q = it->to.q;
        next.tops[i] = it->to.top;
        if (z.insert(next).second) work.push_back(std::move(next));
      }
    }
  }
  return z;
}

bool GeneratorSpec::empty() const {
  for (const auto &p : pop_targets)
    if (!p.empty()) return false;
  return true;
}

GeneratorSpec generator_spec(const Cpds &c) {
  GeneratorSpec g;
  for (std::size_t i = 0; i < c.thread_count(); ++i) {
    std::set<SharedId> pops;
    std::set<SymbolId> emerge;
    bool empty_rule = false;
    for (const auto &act : c.threads[i].actions) {
      if (act.kind() == ActionKind::pop) pops.insert(act.dst);
      if (act.kind() == ActionKind::push && act.rhs.size() == 2)
        emerge.insert(act.rhs[1]);
      if (act.from_empty() && act.rhs.empty()) empty_rule = true;
    }
    const bool starts_empty =
        i >= c.initial_stacks.size() || c.initial_stacks[i].empty();
    g.may_be_empty.push_back(!pops.empty() || starts_empty || empty_rule);
    g.pop_targets.push_back(std::move(pops));
    g.emerge.push_back(std::move(emerge));
  }
  return g;
}

bool is_generator(const GeneratorSpec &g, const VisibleState &v) {
  for (std::size_t i = 0; i < g.pop_targets.size() && i < v.tops.size(); ++i) {
    if (!g.pop_targets[i].count(v.q)) continue;
    if (v.tops[i] == kEmptyTop || g.emerge[i].count(v.tops[i])) return true;
  }
  return false;
}

std::set<VisibleState> enumerate_generators(const Cpds &c,
                                            const GeneratorSpec &g) {
  std::vector<std::vector<SymbolId>> dom(c.thread_count());
  for (std::size_t i = 0; i < c.thread_count(); ++i) {
    for (SymbolId s = 0; s < c.threads[i].alphabet_size(); ++s)
      dom[i].push_back(s);
    if (g.may_be_empty[i]) dom[i].push_back(kEmptyTop);
  }
  std::set<VisibleState> out;
  VisibleState v;
  v.tops.resize(c.thread_count());
  std::vector<std::size_t> idx(c.thread_count(), 0);
  for (SharedId q = 0; q < c.shared_count(); ++q) {
    v.q = q;
    std::fill(idx.begin(), idx.end(), 0);
    bool any_empty = false;
    for (const auto &d : dom) any_empty |= d.empty();
    if (any_empty) break;
    for (;;) {
      for (std::size_t i = 0; i < idx.size(); ++i) v.tops[i] = dom[i][idx[i]];
      if (is_generator(g, v)) out.insert(v);
      std::size_t i = 0;
      while (i < idx.size() && ++idx[i] == dom[i].size()) idx[i++] = 0;
      if (i == idx.size()) break;
    }
  }
  return out;
}

std::set<VisibleState> reachable_generators_upper(
    const GeneratorSpec &g, const std::set<VisibleState> &z) {
  std::set<VisibleState> out;
  for (const auto &v : z)
    if (is_generator(g, v)) out.insert(v);
  return out;
}

std::set<VisibleState> reachable_generators_upper(const Cpds &c) {
  return reachable_generators_upper(generator_spec(c), compute_Z(c));
}

}  // namespace cuba
