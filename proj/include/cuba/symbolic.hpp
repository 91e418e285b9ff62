#pragma once

#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "cuba/automata.hpp"
#include "cuba/textfmt.hpp"
#include "cuba/verdict.hpp"

namespace cuba {

/// <q | L_1, ..., L_n>: the shared state plus one stack language per
/// thread, each held in canonical form.
struct SymbolicState {
  SharedId q = 0;
  std::vector<CanonicalDfa> langs;

  friend bool operator==(const SymbolicState &, const SymbolicState &) = default;
};

struct SymbolicStateHash {
  std::size_t operator()(const SymbolicState &s) const noexcept;
};

SymbolicState initial_symbolic_state(const Cpds &c);

/// Successors of `tau` after one context of thread i, one per reachable
/// shared state, plus `tau` itself.
std::vector<SymbolicState> symbolic_context_post(const Cpds &c,
                                                 const SymbolicState &tau,
                                                 std::size_t i);

std::set<VisibleState> tops_of(const SymbolicState &tau);

/// The word set { w_1 # w_2 # ... # w_n } for one symbolic state; # is the
/// label `sep`, which must lie outside every thread alphabet.
Nfa product_language(const SymbolicState &tau, Label sep);

struct SymbolicLayer {
  std::size_t k = 0;
  std::vector<std::size_t> delta;           // indices of states new at k
  std::vector<VisibleState> visible_delta;  // sorted
};

class SymbolicExplorer {
 public:
  /// `layer_budget` caps the number of symbolic states held at any bound.
  SymbolicExplorer(const Cpds &c, std::size_t layer_budget);

  std::size_t k() const { return layers_.size() - 1; }
  const SymbolicLayer &layer(std::size_t k) const { return layers_.at(k); }
  const std::vector<SymbolicLayer> &layers() const { return layers_; }
  const std::vector<SymbolicState> &states() const { return states_; }
  const std::set<VisibleState> &visible_states() const { return visible_; }

  /// Throws BudgetExhausted when the state budget is exceeded.
  const SymbolicLayer &advance();

  /// A symbolic state whose tops contain `v`, if any has been reached.
  std::optional<std::size_t> find_with_top(const VisibleState &v) const;

  /// True iff the union of concretizations did not grow at the last bound.
  bool last_layer_adds_nothing() const;

 private:
  struct PostKey {
    std::size_t thread;
    SharedId q;
    CanonicalDfa lang;
    friend bool operator==(const PostKey &, const PostKey &) = default;
  };
  struct PostKeyHash {
    std::size_t operator()(const PostKey &k) const noexcept;
  };
  const std::vector<std::pair<SharedId, CanonicalDfa>> &thread_post(
      std::size_t i, SharedId q, const CanonicalDfa &lang);

  const Cpds &c_;
  std::size_t budget_;
  Label sep_;
  std::vector<SymbolicState> states_;
  std::unordered_map<SymbolicState, std::size_t, SymbolicStateHash> index_;
  std::vector<SymbolicLayer> layers_;
  std::set<VisibleState> visible_;
  std::unordered_map<PostKey, std::vector<std::pair<SharedId, CanonicalDfa>>,
                     PostKeyHash>
      post_cache_;
};

Verdict scheme1_symbolic(const Cpds &c, const PropertySpec &prop,
                         const Budgets &b, const RunControl *ctl = nullptr);

}  // namespace cuba
