#pragma once

#include <set>
#include <unordered_map>
#include <vector>

#include "cuba/model.hpp"
#include "cuba/textfmt.hpp"
#include "cuba/verdict.hpp"

namespace cuba {

/// States new at one context bound.
struct ReachLayer {
  std::size_t k = 0;
  std::vector<GlobalState> delta;          // sorted
  std::vector<VisibleState> visible_delta;  // sorted
};

/// Incremental computation of R_0, R_1, ... by expanding only the states
/// new at the previous bound.
class ExplicitExplorer {
 public:
  ExplicitExplorer(const Cpds &c, std::size_t closure_budget);

  /// Index of the last completed layer.
  std::size_t k() const { return layers_.size() - 1; }
  const ReachLayer &layer(std::size_t k) const { return layers_.at(k); }
  const std::vector<ReachLayer> &layers() const { return layers_; }

  /// Computes layer k()+1. Throws BudgetExhausted; the explorer is left at
  /// the previous layer in that case.
  const ReachLayer &advance();

  std::size_t state_count() const { return nodes_.size(); }
  bool contains(const GlobalState &s) const { return index_.count(s) != 0; }
  /// The bound at which `s` first appeared, if reached.
  std::optional<std::size_t> bound_of(const GlobalState &s) const;
  const std::set<VisibleState> &visible_states() const { return visible_; }
  /// All reached states, sorted.
  std::vector<GlobalState> states() const;

  /// A path from the initial state to `s` using at most bound_of(s)
  /// contexts. `s` must have been reached.
  Path witness(const GlobalState &s) const;

 private:
  struct Node {
    std::size_t k;
    std::size_t record;  // closure record, npos for the initial state
    std::size_t local;   // index inside that closure
  };
  struct Record {
    std::size_t root;  // node id
    std::size_t thread;
    std::vector<std::size_t> parent;
    std::vector<std::size_t> action;
  };

  const Cpds &c_;
  std::size_t budget_;
  std::vector<GlobalState> states_;
  std::vector<Node> nodes_;
  std::unordered_map<GlobalState, std::size_t, GlobalStateHash> index_;
  std::vector<Record> records_;
  std::vector<ReachLayer> layers_;
  std::vector<std::vector<std::size_t>> layer_nodes_;
  std::set<VisibleState> visible_;
};

struct ReachTable {
  std::vector<ReachLayer> layers;
  bool complete = true;  // false if a budget stopped the build early
  std::string note;
};

ReachTable build_table(const Cpds &c, std::size_t max_k, std::size_t budget);

Verdict scheme1_explicit(const Cpds &c, const PropertySpec &prop,
                         const Budgets &b, const RunControl *ctl = nullptr);

}  // namespace cuba
