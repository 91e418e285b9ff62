#include "cuba/automata.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

namespace cuba {

// ---------------------------------------------------------------- Nfa ----

StateId Nfa::add_state() {
  out_.emplace_back();
  initial_flag_.push_back(0);
  final_flag_.push_back(0);
  return static_cast<StateId>(out_.size() - 1);
}

bool Nfa::add_transition(StateId from, Label label, StateId to) {
  assert(from < out_.size() && to < out_.size());
  if (!index_.insert({from, label, to}).second) return false;
  out_[from].push_back({from, label, to});
  ++transition_count_;
  return true;
}

bool Nfa::has_transition(StateId from, Label label, StateId to) const {
  return index_.count({from, label, to}) != 0;
}

void Nfa::add_initial(StateId s) {
  if (!initial_flag_[s]) {
    initial_flag_[s] = 1;
    initials_.push_back(s);
  }
}

void Nfa::add_final(StateId s) {
  if (!final_flag_[s]) {
    final_flag_[s] = 1;
    finals_.push_back(s);
  }
}

std::vector<Transition> Nfa::transitions() const {
  return {index_.begin(), index_.end()};
}

std::vector<StateId> Nfa::closure(std::vector<StateId> from) const {
  std::vector<char> in(out_.size(), 0);
  std::vector<StateId> stack;
  for (auto s : from)
    if (!in[s]) {
      in[s] = 1;
      stack.push_back(s);
    }
  std::vector<StateId> result;
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    result.push_back(s);
    for (const auto &t : out_[s])
      if (t.label == kEpsLabel && !in[t.to]) {
        in[t.to] = 1;
        stack.push_back(t.to);
      }
  }
  std::sort(result.begin(), result.end());
  return result;
}

std::vector<StateId> Nfa::post(const std::vector<StateId> &from,
                               Label a) const {
  std::vector<StateId> next;
  for (auto s : from)
    for (const auto &t : out_[s])
      if (t.label == a) next.push_back(t.to);
  return closure(std::move(next));
}

bool Nfa::accepts_from(StateId start, const std::vector<Label> &word) const {
  auto cur = closure({start});
  for (auto a : word) {
    cur = post(cur, a);
    if (cur.empty()) return false;
  }
  return std::any_of(cur.begin(), cur.end(),
                     [&](StateId s) { return final_flag_[s] != 0; });
}

bool Nfa::accepts(const std::vector<Label> &word) const {
  auto cur = closure(initials_);
  for (auto a : word) cur = post(cur, a);
  return std::any_of(cur.begin(), cur.end(),
                     [&](StateId s) { return final_flag_[s] != 0; });
}

std::vector<bool> Nfa::reachable_from(const std::vector<StateId> &roots) const {
  std::vector<bool> seen(out_.size(), false);
  std::vector<StateId> stack;
  for (auto r : roots)
    if (!seen[r]) {
      seen[r] = true;
      stack.push_back(r);
    }
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    for (const auto &t : out_[s])
      if (!seen[t.to]) {
        seen[t.to] = true;
        stack.push_back(t.to);
      }
  }
  return seen;
}

std::vector<bool> Nfa::coreachable() const {
  std::vector<std::vector<StateId>> in(out_.size());
  for (const auto &edges : out_)
    for (const auto &t : edges) in[t.to].push_back(t.from);
  std::vector<bool> seen(out_.size(), false);
  std::vector<StateId> stack;
  for (auto f : finals_) {
    seen[f] = true;
    stack.push_back(f);
  }
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    for (auto p : in[s])
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
  }
  return seen;
}

// ------------------------------------------------------ canonical DFA ----

bool CanonicalDfa::empty_language() const {
  return states == 1 && !final[0] && delta[0].empty();
}

Nfa CanonicalDfa::to_nfa() const {
  Nfa n;
  for (std::size_t s = 0; s < states; ++s) n.add_state();
  n.add_initial(0);
  for (std::size_t s = 0; s < states; ++s) {
    if (final[s]) n.add_final(static_cast<StateId>(s));
    for (auto [a, t] : delta[s]) n.add_transition(static_cast<StateId>(s), a, t);
  }
  return n;
}

std::size_t CanonicalDfaHash::operator()(const CanonicalDfa &d) const noexcept {
  std::size_t h = d.states;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (std::size_t s = 0; s < d.states; ++s) {
    mix(static_cast<std::size_t>(d.final[s]));
    for (auto [a, t] : d.delta[s]) {
      mix(a);
      mix(t);
    }
  }
  return h;
}

namespace {

struct SubsetDfa {
  std::vector<std::map<Label, StateId>> delta;
  std::vector<char> final;
};

SubsetDfa determinize(const Nfa &a) {
  std::set<Label> labels;
  for (StateId s = 0; s < a.state_count(); ++s)
    for (const auto &t : a.out(s))
      if (t.label != kEpsLabel) labels.insert(t.label);

  SubsetDfa d;
  std::map<std::vector<StateId>, StateId> ids;
  std::deque<std::vector<StateId>> work;
  auto intern = [&](std::vector<StateId> set) -> StateId {
    auto it = ids.find(set);
    if (it != ids.end()) return it->second;
    const auto id = static_cast<StateId>(d.delta.size());
    d.delta.emplace_back();
    d.final.push_back(std::any_of(set.begin(), set.end(), [&](StateId s) {
      return a.is_final(s);
    }));
    ids.emplace(set, id);
    work.push_back(std::move(set));
    return id;
  };
  intern(a.closure(a.initials()));
  while (!work.empty()) {
    auto set = std::move(work.front());
    work.pop_front();
    const StateId id = ids.at(set);
    for (auto l : labels) {
      auto next = a.post(set, l);
      if (next.empty()) continue;
      const StateId to = intern(std::move(next));
      d.delta[id][l] = to;
    }
  }
  return d;
}

}  // namespace

CanonicalDfa minimize_canonical(const Nfa &a) {
  SubsetDfa d = determinize(a);
  const std::size_t n = d.delta.size();

  // Trim to co-reachable states; the result is a partial DFA.
  std::vector<std::vector<StateId>> in(n);
  for (StateId s = 0; s < n; ++s)
    for (auto [l, t] : d.delta[s]) in[t].push_back(s);
  std::vector<char> useful(n, 0);
  std::vector<StateId> stack;
  for (StateId s = 0; s < n; ++s)
    if (d.final[s]) {
      useful[s] = 1;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    const StateId s = stack.back();
    stack.pop_back();
    for (auto p : in[s])
      if (!useful[p]) {
        useful[p] = 1;
        stack.push_back(p);
      }
  }
  if (!useful[0]) return CanonicalDfa{};

  // Moore refinement. A missing transition goes to an implicit sink.
  std::vector<std::size_t> cls(n, 0);
  for (StateId s = 0; s < n; ++s) cls[s] = d.final[s] ? 1 : 0;
  std::size_t classes = 0;
  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> sig_ids;
    std::vector<std::size_t> next(n, 0);
    for (StateId s = 0; s < n; ++s) {
      if (!useful[s]) continue;
      std::vector<std::size_t> sig{cls[s]};
      for (auto [l, t] : d.delta[s]) {
        if (!useful[t]) continue;
        sig.push_back(l);
        sig.push_back(cls[t]);
      }
      next[s] = sig_ids.emplace(std::move(sig), sig_ids.size()).first->second;
    }
    const std::size_t count = sig_ids.size();
    cls = std::move(next);
    if (count == classes) break;
    classes = count;
  }

  // Canonical numbering: BFS from the initial class, labels ascending.
  std::vector<StateId> rep(classes, static_cast<StateId>(-1));
  for (StateId s = 0; s < n; ++s)
    if (useful[s] && rep[cls[s]] == static_cast<StateId>(-1)) rep[cls[s]] = s;

  CanonicalDfa out;
  out.states = 0;
  out.delta.clear();
  out.final.clear();
  std::vector<StateId> number(classes, static_cast<StateId>(-1));
  std::deque<std::size_t> work;
  number[cls[0]] = 0;
  work.push_back(cls[0]);
  std::vector<std::size_t> order;
  while (!work.empty()) {
    const std::size_t c = work.front();
    work.pop_front();
    order.push_back(c);
    for (auto [l, t] : d.delta[rep[c]]) {
      if (!useful[t]) continue;
      if (number[cls[t]] == static_cast<StateId>(-1)) {
        number[cls[t]] = static_cast<StateId>(order.size() + work.size());
        work.push_back(cls[t]);
      }
    }
  }
  out.states = order.size();
  out.delta.resize(out.states);
  out.final.resize(out.states, 0);
  for (std::size_t c : order) {
    const StateId me = number[c];
    out.final[me] = d.final[rep[c]];
    for (auto [l, t] : d.delta[rep[c]])
      if (useful[t]) out.delta[me].emplace_back(l, number[cls[t]]);
  }
  return out;
}

// ---------------------------------------------------------- inclusion ----

bool language_included(const Nfa &a, const Nfa &b) {
  // Explore pairs (p, S): p a state of `a`, S the epsilon-closed set of
  // `b` states reached on the same word. A pair (p, S) is subsumed by an
  // already-seen (p, S') with S' a subset of S.
  using Macro = std::vector<StateId>;
  std::vector<std::vector<Macro>> seen(a.state_count());
  std::deque<std::pair<StateId, Macro>> work;

  auto subsumed = [&](StateId p, const Macro &s) {
    for (const auto &t : seen[p])
      if (std::includes(s.begin(), s.end(), t.begin(), t.end())) return true;
    return false;
  };
  auto push = [&](StateId p, Macro s) {
    if (subsumed(p, s)) return;
    auto &bucket = seen[p];
    bucket.erase(std::remove_if(bucket.begin(), bucket.end(),
                                [&](const Macro &t) {
                                  return std::includes(t.begin(), t.end(),
                                                       s.begin(), s.end());
                                }),
                 bucket.end());
    bucket.push_back(s);
    work.emplace_back(p, std::move(s));
  };

  const Macro start = b.closure(b.initials());
  for (auto p : a.initials()) push(p, start);
  while (!work.empty()) {
    auto [p, s] = std::move(work.front());
    work.pop_front();
    if (a.is_final(p) &&
        std::none_of(s.begin(), s.end(), [&](StateId x) { return b.is_final(x); }))
      return false;
    for (const auto &t : a.out(p)) {
      if (t.label == kEpsLabel)
        push(t.to, s);
      else
        push(t.to, b.post(s, t.label));
    }
  }
  return true;
}

bool language_equal(const Nfa &a, const Nfa &b) {
  if (&a == &b) return true;
  return language_included(a, b) && language_included(b, a);
}

// ----------------------------------------------------------- builders ----

namespace {

StateId copy_into(Nfa &dst, const Nfa &src, bool keep_initials,
                  bool keep_finals) {
  const auto offset = static_cast<StateId>(dst.state_count());
  for (StateId s = 0; s < src.state_count(); ++s) dst.add_state();
  for (StateId s = 0; s < src.state_count(); ++s) {
    for (const auto &t : src.out(s))
      dst.add_transition(offset + t.from, t.label, offset + t.to);
    if (keep_initials && src.is_initial(s)) dst.add_initial(offset + s);
    if (keep_finals && src.is_final(s)) dst.add_final(offset + s);
  }
  return offset;
}

}  // namespace

Nfa nfa_union(const Nfa &a, const Nfa &b) {
  Nfa out;
  copy_into(out, a, true, true);
  copy_into(out, b, true, true);
  return out;
}

Nfa nfa_concat(const Nfa &a, Label sep, const Nfa &b) {
  Nfa out;
  copy_into(out, a, true, false);
  const StateId off_b = copy_into(out, b, false, true);
  for (auto f : a.finals())
    for (auto i : b.initials()) out.add_transition(f, sep, off_b + i);
  return out;
}

Nfa nfa_from_word(const std::vector<Label> &w) {
  Nfa out;
  StateId cur = out.add_state();
  out.add_initial(cur);
  for (auto l : w) {
    const StateId next = out.add_state();
    out.add_transition(cur, l, next);
    cur = next;
  }
  out.add_final(cur);
  return out;
}

Nfa nfa_empty_language() {
  Nfa out;
  out.add_initial(out.add_state());
  return out;
}

// --------------------------------------------------------- projection ----

std::set<SymbolId> project_tops(const Nfa &a, StateId start) {
  std::set<SymbolId> tops;
  const auto live = a.coreachable();
  for (auto s : a.closure({start})) {
    if (a.is_final(s)) tops.insert(kEmptyTop);
    for (const auto &t : a.out(s))
      if (t.label != kEpsLabel && live[t.to]) tops.insert(t.label);
  }
  return tops;
}

// ------------------------------------------------------------- cycles ----

std::optional<std::vector<Transition>> find_accepting_cycle(const Nfa &a) {
  const std::size_t n = a.state_count();
  const auto fwd = a.reachable_from(a.initials());
  const auto bwd = a.coreachable();
  std::vector<char> useful(n, 0);
  for (std::size_t s = 0; s < n; ++s) useful[s] = fwd[s] && bwd[s];

  // Iterative Tarjan over the useful subgraph.
  constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
  std::vector<char> on_stack(n, 0);
  std::vector<StateId> scc_stack;
  std::size_t counter = 0, comps = 0;
  struct Frame {
    StateId s;
    std::size_t edge;
  };
  for (StateId root = 0; root < n; ++root) {
    if (!useful[root] || index[root] != unvisited) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    scc_stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame &f = call.back();
      const auto &edges = a.out(f.s);
      if (f.edge < edges.size()) {
        const StateId t = edges[f.edge++].to;
        if (!useful[t]) continue;
        if (index[t] == unvisited) {
          index[t] = low[t] = counter++;
          scc_stack.push_back(t);
          on_stack[t] = 1;
          call.push_back({t, 0});
        } else if (on_stack[t]) {
          low[f.s] = std::min(low[f.s], index[t]);
        }
        continue;
      }
      const StateId s = f.s;
      call.pop_back();
      if (!call.empty()) low[call.back().s] = std::min(low[call.back().s], low[s]);
      if (low[s] == index[s]) {
        StateId x;
        do {
          x = scc_stack.back();
          scc_stack.pop_back();
          on_stack[x] = 0;
          comp[x] = comps;
        } while (x != s);
        ++comps;
      }
    }
  }

  for (StateId u = 0; u < n; ++u) {
    if (!useful[u]) continue;
    for (const auto &e : a.out(u)) {
      if (e.label == kEpsLabel || !useful[e.to] || comp[e.to] != comp[u])
        continue;
      // Close the cycle with a path e.to -> u inside the component.
      std::vector<Transition> cycle{e};
      if (e.to == u) return cycle;
      std::vector<std::optional<Transition>> via(n);
      std::deque<StateId> work{e.to};
      std::vector<char> seen(n, 0);
      seen[e.to] = 1;
      while (!work.empty() && !seen[u]) {
        const StateId s = work.front();
        work.pop_front();
        for (const auto &t : a.out(s)) {
          if (seen[t.to] || !useful[t.to] || comp[t.to] != comp[u]) continue;
          seen[t.to] = 1;
          via[t.to] = t;
          work.push_back(t.to);
        }
      }
      std::vector<Transition> back;
      for (StateId s = u; s != e.to; s = via[s]->from) back.push_back(*via[s]);
      cycle.insert(cycle.end(), back.rbegin(), back.rend());
      return cycle;
    }
  }
  return std::nullopt;
}

bool has_accepting_cycle(const Nfa &a) {
  return find_accepting_cycle(a).has_value();
}

std::string to_dot(const Nfa &a,
                   const std::function<std::string(StateId)> &state_name,
                   const std::function<std::string(Label)> &label_name) {
  std::ostringstream os;
  os << "digraph psa {\n  rankdir=LR;\n";
  for (StateId s = 0; s < a.state_count(); ++s) {
    os << "  n" << s << " [label=\"" << state_name(s) << "\""
       << (a.is_final(s) ? ", shape=doublecircle" : ", shape=circle") << "];\n";
  }
  for (const auto &t : a.transitions())
    os << "  n" << t.from << " -> n" << t.to << " [label=\""
       << (t.label == kEpsLabel ? std::string("eps") : label_name(t.label))
       << "\"];\n";
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------- PSA ----

Psa::Psa(std::size_t shared_count, std::size_t alphabet_size)
    : shared_count_(shared_count), alphabet_size_(alphabet_size) {
  for (std::size_t q = 0; q < shared_count; ++q) nfa_.add_initial(nfa_.add_state());
  final_ = nfa_.add_state();
  nfa_.add_final(final_);
}

namespace {

std::vector<Label> encode(const Word &w, Label bottom) {
  std::vector<Label> out(w.begin(), w.end());
  out.push_back(bottom);
  return out;
}

}  // namespace

bool Psa::accepts(SharedId q, const Word &w) const {
  if (q >= shared_count_) return false;
  for (auto x : w)
    if (x >= alphabet_size_) return false;
  return nfa_.accepts_from(q, encode(w, bottom()));
}

std::set<SymbolId> Psa::project_tops(SharedId q) const {
  std::set<SymbolId> tops;
  const auto live = nfa_.coreachable();
  for (auto s : nfa_.closure({q}))
    for (const auto &t : nfa_.out(s)) {
      if (t.label == kEpsLabel || !live[t.to]) continue;
      tops.insert(t.label == bottom() ? kEmptyTop : t.label);
    }
  return tops;
}

Nfa Psa::stack_language(SharedId q) const {
  // Bottom edges only ever lead into the final state, so a stack word ends
  // exactly where a bottom edge leaves.
  Nfa out;
  for (StateId s = 0; s < nfa_.state_count(); ++s) out.add_state();
  out.add_initial(q);
  for (StateId s = 0; s < nfa_.state_count(); ++s)
    for (const auto &t : nfa_.out(s)) {
      if (t.label == bottom()) {
        if (nfa_.is_final(t.to)) out.add_final(s);
      } else {
        out.add_transition(s, t.label, t.to);
      }
    }
  return out;
}

Psa initial_psa_single(std::size_t shared_count, std::size_t alphabet_size,
                       SharedId q, const Word &w) {
  Psa p(shared_count, alphabet_size);
  Nfa &g = p.graph();
  StateId cur = q;
  for (auto x : w) {
    const StateId next = g.add_state();
    g.add_transition(cur, x, next);
    cur = next;
  }
  g.add_transition(cur, p.bottom(), p.final_state());
  return p;
}

Psa initial_psa_short_stacks(std::size_t shared_count,
                             std::size_t alphabet_size) {
  Psa p(shared_count, alphabet_size);
  Nfa &g = p.graph();
  const StateId mid = g.add_state();
  g.add_transition(mid, p.bottom(), p.final_state());
  for (SharedId q = 0; q < shared_count; ++q) {
    g.add_transition(q, p.bottom(), p.final_state());
    for (Label a = 0; a < alphabet_size; ++a) g.add_transition(q, a, mid);
  }
  return p;
}

Psa initial_psa_language(std::size_t shared_count, std::size_t alphabet_size,
                         SharedId q, const Nfa &lang) {
  Psa p(shared_count, alphabet_size);
  Nfa &g = p.graph();
  const StateId offset = copy_into(g, lang, false, false);
  for (auto i : lang.initials()) g.add_transition(q, kEpsLabel, offset + i);
  for (auto f : lang.finals())
    g.add_transition(offset + f, p.bottom(), p.final_state());
  return p;
}

// ---------------------------------------------------------- post-star ----

SaturationResult post_star(const ThreadProgram &program, const Psa &input) {
  const std::size_t nq = input.shared_count();
  const Label bottom = input.bottom();
  const std::size_t width = input.alphabet_size() + 1;

  // Rules over Sigma + {bottom}; empty-stack rules read and restore the
  // bottom sentinel so every rule has a one-symbol left-hand side.
  struct Rule {
    SharedId dst;
    std::vector<Label> rhs;
  };
  std::vector<std::vector<Rule>> rules(nq * width);
  for (const auto &a : program.actions) {
    if (a.src >= nq) continue;
    const Label top = a.from_empty() ? bottom : a.top;
    std::vector<Label> rhs(a.rhs.begin(), a.rhs.end());
    if (a.from_empty()) {
      if (rhs.size() > 1) continue;  // never enabled
      rhs.push_back(bottom);
    }
    rules[a.src * width + top].push_back({a.dst, std::move(rhs)});
  }

  SaturationResult res{input, {}};
  Nfa &g = res.psa.graph();
  const std::size_t base_transitions = g.transition_count();

  // rel starts as every transition not leaving a shared state; trans holds
  // the rest. Rebuild g so that rel == g at all times.
  Nfa rel;
  for (StateId s = 0; s < g.state_count(); ++s) rel.add_state();
  for (auto s : g.initials()) rel.add_initial(s);
  for (auto s : g.finals()) rel.add_final(s);
  std::deque<Transition> trans;
  std::vector<std::vector<StateId>> eps_into(g.state_count());
  for (const auto &t : g.transitions()) {
    if (t.from < nq)
      trans.push_back(t);
    else
      rel.add_transition(t.from, t.label, t.to);
  }

  std::map<std::pair<SharedId, Label>, StateId> aux;
  auto aux_state = [&](SharedId p, Label g1) {
    auto it = aux.find({p, g1});
    if (it != aux.end()) return it->second;
    const StateId s = rel.add_state();
    eps_into.emplace_back();
    aux.emplace(std::make_pair(p, g1), s);
    return s;
  };

  while (!trans.empty()) {
    const Transition t = trans.front();
    trans.pop_front();
    ++res.stats.iterations;
    if (!rel.add_transition(t.from, t.label, t.to)) continue;

    if (t.label == kEpsLabel) {
      eps_into[t.to].push_back(t.from);
      for (const auto &u : std::vector<Transition>(rel.out(t.to)))
        if (u.label != kEpsLabel) trans.push_back({t.from, u.label, u.to});
      continue;
    }
    if (t.from >= nq) continue;
    for (const auto &r : rules[t.from * width + t.label]) {
      switch (r.rhs.size()) {
        case 0:
          trans.push_back({r.dst, kEpsLabel, t.to});
          break;
        case 1:
          trans.push_back({r.dst, r.rhs[0], t.to});
          break;
        default: {
          const StateId mid = aux_state(r.dst, r.rhs[0]);
          trans.push_back({r.dst, r.rhs[0], mid});
          if (rel.add_transition(mid, r.rhs[1], t.to)) {
            for (auto p : std::vector<StateId>(eps_into[mid]))
              trans.push_back({p, r.rhs[1], t.to});
          }
          break;
        }
      }
    }
  }

  res.stats.auxiliary_states = aux.size();
  g = std::move(rel);
  res.stats.added_transitions = g.transition_count() - base_transitions;
  return res;
}

}  // namespace cuba
