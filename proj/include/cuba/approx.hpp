#pragma once

#include <set>
#include <vector>

#include "cuba/model.hpp"

namespace cuba {

/// A thread state cut off at stack height one: (q, top) with kEmptyTop for
/// the empty stack.
struct ShortState {
  SharedId q = 0;
  SymbolId top = kEmptyTop;

  friend bool operator==(const ShortState &, const ShortState &) = default;
  friend auto operator<=>(const ShortState &, const ShortState &) = default;
};

struct ShortTransition {
  ShortState from;
  ShortState to;

  friend bool operator==(const ShortTransition &,
                         const ShortTransition &) = default;
  friend auto operator<=>(const ShortTransition &,
                          const ShortTransition &) = default;
};

/// Finite abstraction of one thread: stacks truncated to their top symbol,
/// pops fanning out to every symbol that may emerge under a push.
struct ThreadAbstraction {
  std::set<ShortTransition> transitions;
  std::set<SymbolId> emerging;
};

ThreadAbstraction build_abstraction(const ThreadProgram &p);

/// Visible states reachable in the product of the per-thread abstractions,
/// starting from the visible projection of the initial state.
std::set<VisibleState> compute_Z(const Cpds &c);

struct GeneratorSpec {
  std::vector<std::set<SharedId>> pop_targets;
  std::vector<std::set<SymbolId>> emerge;
  /// Whether thread i's stack can ever be empty. Only used to bound the
  /// enumeration domain; membership does not depend on it.
  std::vector<bool> may_be_empty;

  bool empty() const;
};

GeneratorSpec generator_spec(const Cpds &c);

bool is_generator(const GeneratorSpec &g, const VisibleState &v);

/// Explicit list of generators over Q x prod(Sigma_i + optional eps).
std::set<VisibleState> enumerate_generators(const Cpds &c,
                                            const GeneratorSpec &g);

/// Generators that lie in Z.
std::set<VisibleState> reachable_generators_upper(const Cpds &c);
std::set<VisibleState> reachable_generators_upper(
    const GeneratorSpec &g, const std::set<VisibleState> &z);

}  // namespace cuba
