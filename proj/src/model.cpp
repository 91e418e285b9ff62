#include "cuba/model.hpp"

#include <deque>
#include <set>
#include <sstream>
#include <unordered_map>

namespace cuba {

namespace {

inline void hash_combine(std::size_t &seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace

ActionKind Action::kind() const {
  const std::size_t lhs = from_empty() ? 0 : 1;
  if (lhs == 1 && rhs.empty()) return ActionKind::pop;
  if (rhs.size() == lhs) return ActionKind::overwrite;
  return ActionKind::push;
}

std::size_t Path::contexts() const {
  std::size_t n = 0;
  std::size_t prev = static_cast<std::size_t>(-1);
  for (const auto &st : steps) {
    if (st.thread != prev) ++n;
    prev = st.thread;
  }
  return n;
}

GlobalState initial_state(const Cpds &c) {
  GlobalState s;
  s.q = c.initial_shared;
  s.stacks = c.initial_stacks;
  s.stacks.resize(c.thread_count());
  return s;
}

SymbolId top_of(const Word &w) { return w.empty() ? kEmptyTop : w.front(); }

VisibleState visible(const GlobalState &s) {
  VisibleState v;
  v.q = s.q;
  v.tops.reserve(s.stacks.size());
  for (const auto &w : s.stacks) v.tops.push_back(top_of(w));
  return v;
}

bool apply_action(const Action &a, SharedId q, const Word &w, SharedId &q_out,
                  Word &w_out) {
  if (a.src != q) return false;
  if (a.from_empty()) {
    if (!w.empty() || a.rhs.size() > 1) return false;
    q_out = a.dst;
    w_out = a.rhs;
    return true;
  }
  if (w.empty() || w.front() != a.top) return false;
  q_out = a.dst;
  w_out.clear();
  w_out.reserve(w.size() + 1);
  w_out.insert(w_out.end(), a.rhs.begin(), a.rhs.end());
  w_out.insert(w_out.end(), w.begin() + 1, w.end());
  return true;
}

std::vector<Successor> enabled_successors(const Cpds &c, const GlobalState &s,
                                          std::size_t i) {
  std::vector<Successor> out;
  const auto &actions = c.threads.at(i).actions;
  for (std::size_t a = 0; a < actions.size(); ++a) {
    SharedId q2;
    Word w2;
    if (!apply_action(actions[a], s.q, s.stacks[i], q2, w2)) continue;
    Successor succ{a, s};
    succ.state.q = q2;
    succ.state.stacks[i] = std::move(w2);
    out.push_back(std::move(succ));
  }
  return out;
}

ThreadClosure thread_closure(const Cpds &c, const GlobalState &s,
                             std::size_t i, std::size_t budget) {
  // Only (q, stack_i) varies inside a closure, so the index is keyed on the
  // thread state rather than the whole global state.
  struct KeyHash {
    std::size_t operator()(const std::pair<SharedId, Word> &k) const noexcept {
      std::size_t h = k.first;
      for (auto x : k.second) hash_combine(h, x);
      return h;
    }
  };

  ThreadClosure out;
  out.thread = i;
  out.states.push_back(s);
  out.parent.push_back(ThreadClosure::npos);
  out.action.push_back(ThreadClosure::npos);

  std::unordered_map<std::pair<SharedId, Word>, std::size_t, KeyHash> seen;
  seen.emplace(std::make_pair(s.q, s.stacks[i]), 0);

  const auto &actions = c.threads.at(i).actions;
  for (std::size_t head = 0; head < out.states.size(); ++head) {
    const SharedId q = out.states[head].q;
    const Word cur = out.states[head].stacks[i];
    for (std::size_t a = 0; a < actions.size(); ++a) {
      SharedId q2;
      Word w2;
      if (!apply_action(actions[a], q, cur, q2, w2)) continue;
      auto key = std::make_pair(q2, w2);
      if (seen.count(key)) continue;
      if (out.states.size() >= budget) {
        throw BudgetExhausted("per-context closure exceeded the state budget",
                              out.states.size());
      }
      seen.emplace(std::move(key), out.states.size());
      GlobalState next = out.states[head];
      next.q = q2;
      next.stacks[i] = std::move(w2);
      out.states.push_back(std::move(next));
      out.parent.push_back(head);
      out.action.push_back(a);
    }
  }
  return out;
}

std::vector<Diagnostic> validate(const Cpds &c) {
  std::vector<Diagnostic> diags;
  const auto nq = c.shared.size();
  if (nq == 0) diags.push_back({"shared", "no shared states declared"});
  {
    std::set<std::string> names;
    for (const auto &n : c.shared)
      if (!names.insert(n).second)
        diags.push_back({"shared", "duplicate shared state '" + n + "'"});
  }
  if (nq != 0 && c.initial_shared >= nq)
    diags.push_back({"init", "initial shared state out of range"});
  if (c.threads.empty()) diags.push_back({"threads", "no threads declared"});
  if (c.initial_stacks.size() != c.threads.size())
    diags.push_back({"init", "expected one initial word per thread (" +
                                 std::to_string(c.threads.size()) + "), got " +
                                 std::to_string(c.initial_stacks.size())});

  for (std::size_t t = 0; t < c.threads.size(); ++t) {
    const auto &th = c.threads[t];
    const std::string where = "thread " + th.name;
    if (th.symbols.empty())
      diags.push_back({where, "thread must declare a non-empty alphabet"});
    std::set<std::string> names;
    for (const auto &n : th.symbols)
      if (!names.insert(n).second)
        diags.push_back({where, "duplicate stack symbol '" + n + "'"});

    const auto ns = th.symbols.size();
    for (std::size_t a = 0; a < th.actions.size(); ++a) {
      const auto &act = th.actions[a];
      const std::string loc = where + ", rule " + std::to_string(a + 1);
      if (act.src >= nq || act.dst >= nq)
        diags.push_back({loc, "rule references an undeclared shared state"});
      if (!act.from_empty() && act.top >= ns)
        diags.push_back({loc, "rule references an undeclared stack symbol"});
      if (act.rhs.size() > 2)
        diags.push_back({loc, "right-hand side longer than two symbols"});
      for (auto x : act.rhs)
        if (x >= ns)
          diags.push_back({loc, "rule references an undeclared stack symbol"});
      if (act.from_empty() && act.rhs.size() == 2)
        diags.push_back({loc, "never-enabled rule: empty-stack rule pushes two "
                              "symbols"});
    }
    if (t < c.initial_stacks.size())
      for (auto x : c.initial_stacks[t])
        if (x >= ns)
          diags.push_back({"init", "initial word of " + where +
                                       " uses an undeclared symbol"});
  }
  return diags;
}

std::string format_word(const Cpds &c, std::size_t thread, const Word &w) {
  if (w.empty()) return "eps";
  std::string out;
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (j) out += ' ';
    out += c.threads[thread].symbols.at(w[j]);
  }
  return out;
}

std::string format_state(const Cpds &c, const GlobalState &s) {
  std::string out = "<" + c.shared.at(s.q) + "|";
  for (std::size_t i = 0; i < s.stacks.size(); ++i) {
    if (i) out += ',';
    out += format_word(c, i, s.stacks[i]);
  }
  return out + ">";
}

std::string format_visible(const Cpds &c, const VisibleState &v) {
  std::string out = "<" + c.shared.at(v.q) + "|";
  for (std::size_t i = 0; i < v.tops.size(); ++i) {
    if (i) out += ',';
    out += v.tops[i] == kEmptyTop ? "eps" : c.threads[i].symbols.at(v.tops[i]);
  }
  return out + ">";
}

std::string format_action(const Cpds &c, std::size_t thread, const Action &a) {
  std::ostringstream os;
  os << '(' << c.shared.at(a.src) << ','
     << (a.from_empty() ? std::string("eps")
                        : c.threads[thread].symbols.at(a.top))
     << ")->(" << c.shared.at(a.dst) << ',' << format_word(c, thread, a.rhs)
     << ')';
  return os.str();
}

std::size_t GlobalStateHash::operator()(const GlobalState &s) const noexcept {
  std::size_t h = s.q;
  for (const auto &w : s.stacks) {
    hash_combine(h, w.size());
    for (auto x : w) hash_combine(h, x);
  }
  return h;
}

std::size_t VisibleStateHash::operator()(const VisibleState &v) const noexcept {
  std::size_t h = v.q;
  for (auto x : v.tops) hash_combine(h, x);
  return h;
}

}  // namespace cuba
