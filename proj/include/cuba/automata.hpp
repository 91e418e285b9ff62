#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <functional>
#include <vector>

#include "cuba/model.hpp"

namespace cuba {

using StateId = std::uint32_t;
using Label = std::uint32_t;

inline constexpr Label kEpsLabel = std::numeric_limits<Label>::max();

struct Transition {
  StateId from = 0;
  Label label = kEpsLabel;
  StateId to = 0;

  friend bool operator==(const Transition &, const Transition &) = default;
  friend auto operator<=>(const Transition &, const Transition &) = default;
};

/// Nondeterministic finite automaton with epsilon transitions. Labels are
/// plain integers; the caller owns their meaning.
class Nfa {
 public:
  StateId add_state();
  std::size_t state_count() const { return out_.size(); }

  /// Returns true if the transition was not present before.
  bool add_transition(StateId from, Label label, StateId to);
  bool has_transition(StateId from, Label label, StateId to) const;

  void add_initial(StateId s);
  void add_final(StateId s);
  bool is_initial(StateId s) const { return initial_flag_[s]; }
  bool is_final(StateId s) const { return final_flag_[s]; }
  const std::vector<StateId> &initials() const { return initials_; }
  const std::vector<StateId> &finals() const { return finals_; }

  const std::vector<Transition> &out(StateId s) const { return out_[s]; }
  std::size_t transition_count() const { return transition_count_; }
  std::vector<Transition> transitions() const;

  /// Epsilon closure, sorted and deduplicated.
  std::vector<StateId> closure(std::vector<StateId> from) const;
  /// Labeled successors of a set followed by epsilon closure.
  std::vector<StateId> post(const std::vector<StateId> &from, Label a) const;

  bool accepts(const std::vector<Label> &word) const;
  bool accepts_from(StateId start, const std::vector<Label> &word) const;

  std::vector<bool> reachable_from(const std::vector<StateId> &roots) const;
  std::vector<bool> coreachable() const;

 private:
  std::vector<std::vector<Transition>> out_;
  std::vector<char> initial_flag_;
  std::vector<char> final_flag_;
  std::vector<StateId> initials_;
  std::vector<StateId> finals_;
  std::set<Transition> index_;
  std::size_t transition_count_ = 0;
};

/// Canonical minimal trimmed DFA. Two automata have equal languages iff
/// their canonical forms compare equal.
struct CanonicalDfa {
  std::size_t states = 1;
  std::vector<std::vector<std::pair<Label, StateId>>> delta{1};
  std::vector<char> final{0};  // state 0 is initial

  bool empty_language() const;
  Nfa to_nfa() const;
  friend bool operator==(const CanonicalDfa &, const CanonicalDfa &) = default;
};

struct CanonicalDfaHash {
  std::size_t operator()(const CanonicalDfa &d) const noexcept;
};

CanonicalDfa minimize_canonical(const Nfa &a);

bool language_included(const Nfa &a, const Nfa &b);
bool language_equal(const Nfa &a, const Nfa &b);

Nfa nfa_union(const Nfa &a, const Nfa &b);
/// { u . sep . v : u in L(a), v in L(b) }
Nfa nfa_concat(const Nfa &a, Label sep, const Nfa &b);
Nfa nfa_from_word(const std::vector<Label> &w);
Nfa nfa_empty_language();

/// First symbols of the words accepted from `start`; kEmptyTop stands for
/// the empty word.
std::set<SymbolId> project_tops(const Nfa &a, StateId start);

/// True iff the automaton trimmed to useful states has a cycle reading at
/// least one symbol, i.e. iff its language is infinite.
bool has_accepting_cycle(const Nfa &a);
/// The cycle itself, as a closed list of transitions, if one exists.
std::optional<std::vector<Transition>> find_accepting_cycle(const Nfa &a);

std::string to_dot(const Nfa &a,
                   const std::function<std::string(StateId)> &state_name,
                   const std::function<std::string(Label)> &label_name);

/// Pushdown store automaton for one thread.
///
/// States 0..|Q|-1 are the shared states. A configuration <q|w> is stored
/// as the word w followed by a bottom sentinel, read from state q; the
/// sentinel never leaves this class. The accepting states never include a
/// shared state.
class Psa {
 public:
  Psa(std::size_t shared_count, std::size_t alphabet_size);

  std::size_t shared_count() const { return shared_count_; }
  std::size_t alphabet_size() const { return alphabet_size_; }
  Label bottom() const { return static_cast<Label>(alphabet_size_); }

  const Nfa &graph() const { return nfa_; }
  Nfa &graph() { return nfa_; }
  StateId final_state() const { return final_; }

  bool accepts(SharedId q, const Word &w) const;
  std::set<SymbolId> project_tops(SharedId q) const;
  /// Plain stack-word automaton for { w : <q|w> accepted }.
  Nfa stack_language(SharedId q) const;

 private:
  std::size_t shared_count_;
  std::size_t alphabet_size_;
  StateId final_;
  Nfa nfa_;
};

Psa initial_psa_single(std::size_t shared_count, std::size_t alphabet_size,
                       SharedId q, const Word &w);
/// Accepts exactly Q x Sigma^{<=1}.
Psa initial_psa_short_stacks(std::size_t shared_count,
                             std::size_t alphabet_size);
/// Accepts { <q|w> : w in L(lang) } for one fixed q.
Psa initial_psa_language(std::size_t shared_count, std::size_t alphabet_size,
                         SharedId q, const Nfa &lang);

struct SaturationStats {
  std::size_t added_transitions = 0;
  std::size_t auxiliary_states = 0;
  std::size_t iterations = 0;
};

struct SaturationResult {
  Psa psa;
  SaturationStats stats;
};

/// Forward saturation: the result accepts every configuration reachable in
/// `program` from a configuration accepted by `input`.
SaturationResult post_star(const ThreadProgram &program, const Psa &input);

}  // namespace cuba
