#include "cuba/explicit_reach.hpp"

#include <algorithm>

namespace cuba {

namespace {
constexpr std::size_t npos = static_cast<std::size_t>(-1);
}

ExplicitExplorer::ExplicitExplorer(const Cpds &c, std::size_t closure_budget)
    : c_(c), budget_(closure_budget) {
  GlobalState init = initial_state(c);
  index_.emplace(init, 0);
  states_.push_back(init);
  nodes_.push_back({0, npos, 0});
  layer_nodes_.push_back({0});
  ReachLayer l0;
  l0.delta.push_back(init);
  l0.visible_delta.push_back(visible(init));
  visible_.insert(l0.visible_delta.front());
  layers_.push_back(std::move(l0));
}

const ReachLayer &ExplicitExplorer::advance() {
  const std::size_t k = layers_.size();
  std::unordered_map<GlobalState, std::size_t, GlobalStateHash> fresh;
  std::vector<GlobalState> fresh_states;
  std::vector<Node> fresh_nodes;
  std::vector<Record> fresh_records;

  for (auto node : layer_nodes_[k - 1]) {
    for (std::size_t i = 0; i < c_.thread_count(); ++i) {
      ThreadClosure cl = thread_closure(c_, states_[node], i, budget_);
      const std::size_t rec = records_.size() + fresh_records.size();
      bool used = false;
      for (std::size_t j = 1; j < cl.states.size(); ++j) {
        const auto &s = cl.states[j];
        if (index_.count(s) || fresh.count(s)) continue;
        fresh.emplace(s, fresh_states.size());
        fresh_states.push_back(s);
        fresh_nodes.push_back({k, rec, j});
        used = true;
      }
      if (used)
        fresh_records.push_back(
            {node, i, std::move(cl.parent), std::move(cl.action)});
    }
  }

  // Commit.
  ReachLayer layer;
  layer.k = k;
  std::vector<std::size_t> ids;
  const std::size_t base = states_.size();
  for (std::size_t j = 0; j < fresh_states.size(); ++j) {
    index_.emplace(fresh_states[j], base + j);
    ids.push_back(base + j);
  }
  states_.insert(states_.end(), fresh_states.begin(), fresh_states.end());
  nodes_.insert(nodes_.end(), fresh_nodes.begin(), fresh_nodes.end());
  for (auto &r : fresh_records) records_.push_back(std::move(r));

  std::sort(ids.begin(), ids.end(),
            [&](std::size_t a, std::size_t b) { return states_[a] < states_[b]; });
  std::set<VisibleState> vis_new;
  for (auto id : ids) {
    layer.delta.push_back(states_[id]);
    VisibleState v = visible(states_[id]);
    if (!visible_.count(v)) vis_new.insert(std::move(v));
  }
  visible_.insert(vis_new.begin(), vis_new.end());
  layer.visible_delta.assign(vis_new.begin(), vis_new.end());
  layer_nodes_.push_back(std::move(ids));
  layers_.push_back(std::move(layer));
  return layers_.back();
}

std::optional<std::size_t> ExplicitExplorer::bound_of(
    const GlobalState &s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return nodes_[it->second].k;
}

std::vector<GlobalState> ExplicitExplorer::states() const {
  std::vector<GlobalState> out = states_;
  std::sort(out.begin(), out.end());
  return out;
}

Path ExplicitExplorer::witness(const GlobalState &s) const {
  // Collect the chain of closure segments back to the initial state.
  struct Segment {
    std::size_t thread;
    std::vector<std::size_t> actions;
  };
  std::vector<Segment> segments;
  std::size_t node = index_.at(s);
  while (nodes_[node].record != npos) {
    const Record &r = records_[nodes_[node].record];
    Segment seg{r.thread, {}};
    for (std::size_t j = nodes_[node].local; r.parent[j] != ThreadClosure::npos;
         j = r.parent[j])
      seg.actions.push_back(r.action[j]);
    std::reverse(seg.actions.begin(), seg.actions.end());
    segments.push_back(std::move(seg));
    node = r.root;
  }

  Path p;
  p.initial = initial_state(c_);
  GlobalState cur = p.initial;
  for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
    for (auto a : it->actions) {
      GlobalState next = cur;
      apply_action(c_.threads[it->thread].actions[a], cur.q,
                   cur.stacks[it->thread], next.q, next.stacks[it->thread]);
      p.steps.push_back({it->thread, a, next});
      cur = std::move(next);
    }
  }
  return p;
}

ReachTable build_table(const Cpds &c, std::size_t max_k, std::size_t budget) {
  ExplicitExplorer ex(c, budget);
  ReachTable t;
  try {
    while (ex.k() < max_k) ex.advance();
  } catch (const BudgetExhausted &e) {
    t.complete = false;
    t.note = std::string(e.what()) + " at bound " + std::to_string(ex.k() + 1) +
             " (" + std::to_string(e.states_seen()) + " states)";
  }
  t.layers = ex.layers();
  return t;
}

namespace {

std::optional<GlobalState> first_bad(const PropertySpec &prop,
                                     const std::vector<GlobalState> &states) {
  for (const auto &s : states)
    if (matches(prop, visible(s))) return s;
  return std::nullopt;
}

}  // namespace

Verdict scheme1_explicit(const Cpds &c, const PropertySpec &prop,
                         const Budgets &b, const RunControl *ctl) {
  RunControl local(b.timeout_seconds);
  if (!ctl) ctl = &local;
  Verdict v;
  v.method = Method::scheme1_explicit;
  ExplicitExplorer ex(c, b.closure_states);
  v.visible_deltas.push_back(ex.layer(0).visible_delta);

  auto unsafe = [&](const GlobalState &s, std::size_t k) {
    v.outcome = Outcome::unsafe;
    v.k = k;
    v.witness = visible(s);
    v.path = ex.witness(s);
    return v;
  };
  if (auto bad = first_bad(prop, ex.layer(0).delta)) return unsafe(*bad, 0);

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
    const ReachLayer &l = ex.layer(k);
    v.visible_deltas.push_back(l.visible_delta);
    if (auto bad = first_bad(prop, l.delta)) return unsafe(*bad, k);
    if (l.delta.empty()) {
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
