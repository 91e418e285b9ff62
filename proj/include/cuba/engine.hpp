#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cuba/approx.hpp"
#include "cuba/automata.hpp"
#include "cuba/explicit_reach.hpp"
#include "cuba/symbolic.hpp"
#include "cuba/textfmt.hpp"
#include "cuba/verdict.hpp"

namespace cuba {

enum class Backend { explicit_states, symbolic };

struct ThreadFcrEvidence {
  bool loop_free = true;
  /// A cycle on an accepting path of the saturated automaton.
  std::optional<std::vector<Transition>> cycle;
  std::size_t automaton_states = 0;
  std::size_t automaton_transitions = 0;
  /// Saturated automaton for Q x Sigma^{<=1}, kept for debug export.
  std::optional<Psa> saturated;
};

struct FcrResult {
  bool holds = true;
  std::vector<ThreadFcrEvidence> threads;
};

/// Sufficient check for finite context reachability: every thread's
/// saturated automaton over Q x Sigma^{<=1} is free of accepting cycles.
FcrResult fcr_check(const Cpds &c, bool keep_automata = false);

std::string describe_cycle(const Cpds &c, std::size_t thread, const Psa &psa,
                           const std::vector<Transition> &cycle);

/// Visible-state convergence with the generator test. A safe verdict
/// reports the bound at which the visible sequence stopped growing.
Verdict alg3(const Cpds &c, const PropertySpec &prop, Backend backend,
             const Budgets &b, const RunControl *ctl = nullptr);

Verdict scheme1(const Cpds &c, const PropertySpec &prop, Backend backend,
                const Budgets &b, const RunControl *ctl = nullptr);

struct CubaResult {
  Verdict verdict;
  bool fcr = false;
  /// Every worker's final verdict, in launch order.
  std::vector<Verdict> workers;
};

/// Races the visible-state algorithm against plain convergence when FCR
/// holds, otherwise runs the visible-state algorithm symbolically. `force`
/// overrides the FCR-based choice.
CubaResult cuba(const Cpds &c, const PropertySpec &prop, const Budgets &b,
                std::optional<Backend> force = std::nullopt);

/// Picks the result to report from two conclusive-or-not verdicts; the
/// first argument is the visible-state algorithm's.
Verdict arbitrate(const Verdict &alg3_result, const Verdict &scheme1_result);

}  // namespace cuba
