#include "cuba/symbolic.hpp"

#include <algorithm>
#include <map>

namespace cuba {

namespace {

void mix(std::size_t &h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

std::vector<std::pair<SharedId, CanonicalDfa>> compute_thread_post(
    const Cpds &c, std::size_t i, SharedId q, const CanonicalDfa &lang) {
  const Psa in = initial_psa_language(c.shared_count(),
                                      c.threads[i].alphabet_size(), q,
                                      lang.to_nfa());
  const SaturationResult res = post_star(c.threads[i], in);
  std::vector<std::pair<SharedId, CanonicalDfa>> out;
  for (SharedId q2 = 0; q2 < c.shared_count(); ++q2) {
    CanonicalDfa d = minimize_canonical(res.psa.stack_language(q2));
    if (!d.empty_language()) out.emplace_back(q2, std::move(d));
  }
  return out;
}

}  // namespace

std::size_t SymbolicStateHash::operator()(const SymbolicState &s) const noexcept {
  std::size_t h = s.q;
  for (const auto &d : s.langs) mix(h, CanonicalDfaHash{}(d));
  return h;
}

std::size_t SymbolicExplorer::PostKeyHash::operator()(
    const PostKey &k) const noexcept {
  std::size_t h = k.thread;
  mix(h, k.q);
  mix(h, CanonicalDfaHash{}(k.lang));
  return h;
}

SymbolicState initial_symbolic_state(const Cpds &c) {
  SymbolicState s;
  s.q = c.initial_shared;
  for (std::size_t i = 0; i < c.thread_count(); ++i) {
    const Word w = i < c.initial_stacks.size() ? c.initial_stacks[i] : Word{};
    s.langs.push_back(
        minimize_canonical(nfa_from_word(std::vector<Label>(w.begin(), w.end()))));
  }
  return s;
}

std::vector<SymbolicState> symbolic_context_post(const Cpds &c,
                                                 const SymbolicState &tau,
                                                 std::size_t i) {
  std::vector<SymbolicState> out{tau};
  for (auto &[q2, d] : compute_thread_post(c, i, tau.q, tau.langs[i])) {
    SymbolicState next = tau;
    next.q = q2;
    next.langs[i] = std::move(d);
    if (next != tau) out.push_back(std::move(next));
  }
  return out;
}

std::set<VisibleState> tops_of(const SymbolicState &tau) {
  std::vector<std::vector<SymbolId>> per;
  for (const auto &d : tau.langs) {
    const auto t = project_tops(d.to_nfa(), 0);
    if (t.empty()) return {};
    per.emplace_back(t.begin(), t.end());
  }
  std::set<VisibleState> out;
  VisibleState v;
  v.q = tau.q;
  v.tops.resize(per.size());
  std::vector<std::size_t> idx(per.size(), 0);
  for (;;) {
    for (std::size_t i = 0; i < per.size(); ++i) v.tops[i] = per[i][idx[i]];
    out.insert(v);
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == per[i].size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return out;
}

Nfa product_language(const SymbolicState &tau, Label sep) {
  if (tau.langs.empty()) return nfa_from_word({});
  Nfa out = tau.langs[0].to_nfa();
  for (std::size_t i = 1; i < tau.langs.size(); ++i)
    out = nfa_concat(out, sep, tau.langs[i].to_nfa());
  return out;
}

SymbolicExplorer::SymbolicExplorer(const Cpds &c, std::size_t layer_budget)
    : c_(c), budget_(layer_budget), sep_(0) {
  for (const auto &t : c.threads)
    sep_ = std::max<Label>(sep_, static_cast<Label>(t.alphabet_size()));
  SymbolicState init = initial_symbolic_state(c);
  SymbolicLayer l0;
  l0.delta.push_back(0);
  const auto tops = tops_of(init);
  l0.visible_delta.assign(tops.begin(), tops.end());
  visible_ = tops;
  index_.emplace(init, 0);
  states_.push_back(std::move(init));
  layers_.push_back(std::move(l0));
}

const std::vector<std::pair<SharedId, CanonicalDfa>> &
SymbolicExplorer::thread_post(std::size_t i, SharedId q,
                              const CanonicalDfa &lang) {
  PostKey key{i, q, lang};
  auto it = post_cache_.find(key);
  if (it == post_cache_.end())
    it = post_cache_.emplace(std::move(key), compute_thread_post(c_, i, q, lang))
             .first;
  return it->second;
}

const SymbolicLayer &SymbolicExplorer::advance() {
  const std::size_t k = layers_.size();
  std::vector<SymbolicState> fresh;
  std::unordered_map<SymbolicState, std::size_t, SymbolicStateHash> seen;
  for (auto id : layers_[k - 1].delta) {
    for (std::size_t i = 0; i < c_.thread_count(); ++i) {
      // Copy: states_ is not modified until commit, but the cache may rehash.
      const SymbolicState tau = states_[id];
      for (const auto &[q2, d] : thread_post(i, tau.q, tau.langs[i])) {
        SymbolicState next = tau;
        next.q = q2;
        next.langs[i] = d;
        if (index_.count(next) || seen.count(next)) continue;
        if (states_.size() + fresh.size() >= budget_)
          throw BudgetExhausted("symbolic layer exceeded the state budget",
                                states_.size() + fresh.size());
        seen.emplace(next, fresh.size());
        fresh.push_back(std::move(next));
      }
    }
  }

  SymbolicLayer layer;
  layer.k = k;
  std::set<VisibleState> vis_new;
  for (auto &s : fresh) {
    for (const auto &v : tops_of(s))
      if (!visible_.count(v)) vis_new.insert(v);
    const std::size_t id = states_.size();
    index_.emplace(s, id);
    states_.push_back(std::move(s));
    layer.delta.push_back(id);
  }
  visible_.insert(vis_new.begin(), vis_new.end());
  layer.visible_delta.assign(vis_new.begin(), vis_new.end());
  layers_.push_back(std::move(layer));
  return layers_.back();
}

std::optional<std::size_t> SymbolicExplorer::find_with_top(
    const VisibleState &v) const {
  for (std::size_t id = 0; id < states_.size(); ++id)
    if (states_[id].q == v.q && tops_of(states_[id]).count(v)) return id;
  return std::nullopt;
}

bool SymbolicExplorer::last_layer_adds_nothing() const {
  const auto &last = layers_.back();
  if (last.delta.empty()) return true;
  if (layers_.size() < 2) return false;
  // Every state new at the last bound must be covered, per shared state, by
  // the aggregate language of the earlier states.
  const std::size_t first_new = last.delta.front();
  std::map<SharedId, Nfa> aggregate;
  for (std::size_t id = 0; id < first_new; ++id) {
    const Nfa p = product_language(states_[id], sep_);
    auto it = aggregate.find(states_[id].q);
    if (it == aggregate.end())
      aggregate.emplace(states_[id].q, p);
    else
      it->second = nfa_union(it->second, p);
  }
  for (auto id : last.delta) {
    auto it = aggregate.find(states_[id].q);
    if (it == aggregate.end()) return false;
    if (!language_included(product_language(states_[id], sep_), it->second))
      return false;
  }
  return true;
}

Verdict scheme1_symbolic(const Cpds &c, const PropertySpec &prop,
                         const Budgets &b, const RunControl *ctl) {
  RunControl local(b.timeout_seconds);
  if (!ctl) ctl = &local;
  Verdict v;
  v.method = Method::scheme1_symbolic;
  SymbolicExplorer ex(c, b.layer_states);
  v.visible_deltas.push_back(ex.layer(0).visible_delta);

  auto bad_in = [&](const std::vector<VisibleState> &vs)
      -> std::optional<VisibleState> {
    for (const auto &x : vs)
      if (matches(prop, x)) return x;
    return std::nullopt;
  };
  if (auto bad = bad_in(ex.layer(0).visible_delta)) {
    v.outcome = Outcome::unsafe;
    v.witness = bad;
    return v;
  }
  for (std::size_t k = 1;; ++k) {
    if (k > b.max_k) {
      v.reason = StopReason::max_k;
      break;
    }
    if (auto r = ctl->check(k); r != StopReason::none) {
      v.reason = r;
      break;
    }
    try {
      ex.advance();
    } catch (const BudgetExhausted &e) {
      v.reason = StopReason::budget;
      v.detail = e.what();
      break;
    }
    v.round = k;
    v.visible_deltas.push_back(ex.layer(k).visible_delta);
    if (auto bad = bad_in(ex.layer(k).visible_delta)) {
      v.outcome = Outcome::unsafe;
      v.k = k;
      v.witness = bad;
      return v;
    }
    if (ex.last_layer_adds_nothing()) {
      v.outcome = Outcome::safe;
      v.k = k;
      return v;
    }
  }
  v.outcome = Outcome::inconclusive;
  v.k = ex.k();
  return v;
}

}  // namespace cuba
