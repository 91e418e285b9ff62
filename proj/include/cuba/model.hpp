#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace cuba {

/// Index into the shared-state set Q. Dense, 0..|Q|-1.
using SharedId = std::uint32_t;

/// Index into one thread's stack alphabet. Dense per thread.
using SymbolId = std::uint32_t;

/// Absent-top marker: the empty word is not a stack symbol.
inline constexpr SymbolId kEmptyTop = std::numeric_limits<SymbolId>::max();

/// A stack word, leftmost symbol is the top of the stack.
using Word = std::vector<SymbolId>;

enum class ActionKind { pop, overwrite, push };

/// A pushdown action (q, top) -> (q', rhs), |top| <= 1, |rhs| <= 2.
///
/// `top == kEmptyTop` denotes an action enabled on the empty stack.
/// For pushes, rhs[0] is the new top and rhs[1] overwrites the old top.
struct Action {
  SharedId src = 0;
  SymbolId top = kEmptyTop;
  SharedId dst = 0;
  Word rhs;

  bool from_empty() const { return top == kEmptyTop; }
  ActionKind kind() const;

  friend bool operator==(const Action &, const Action &) = default;
  friend auto operator<=>(const Action &, const Action &) = default;
};

/// One thread of a CPDS: its stack alphabet and pushdown program.
struct ThreadProgram {
  std::string name;
  std::vector<std::string> symbols;
  std::vector<Action> actions;

  std::size_t alphabet_size() const { return symbols.size(); }
};

/// A concurrent pushdown system with a fixed number of threads sharing Q.
///
/// Treated as immutable once built; every analysis takes it by const
/// reference and may share it across workers.
struct Cpds {
  std::vector<std::string> shared;
  SharedId initial_shared = 0;
  std::vector<ThreadProgram> threads;
  std::vector<Word> initial_stacks;

  std::size_t thread_count() const { return threads.size(); }
  std::size_t shared_count() const { return shared.size(); }
};

struct GlobalState {
  SharedId q = 0;
  std::vector<Word> stacks;

  friend bool operator==(const GlobalState &, const GlobalState &) = default;
  friend auto operator<=>(const GlobalState &, const GlobalState &) = default;
};

/// The projection <q | T(w_1), ..., T(w_n)> of a global state.
struct VisibleState {
  SharedId q = 0;
  std::vector<SymbolId> tops;

  friend bool operator==(const VisibleState &, const VisibleState &) = default;
  friend auto operator<=>(const VisibleState &, const VisibleState &) = default;
};

struct Step {
  std::size_t thread = 0;
  std::size_t action = 0;  // index into threads[thread].actions
  GlobalState state;       // state after the step
};

struct Path {
  GlobalState initial;
  std::vector<Step> steps;

  const GlobalState &last() const {
    return steps.empty() ? initial : steps.back().state;
  }
  /// Number of maximal same-thread runs along the path.
  std::size_t contexts() const;
};

struct Successor {
  std::size_t action = 0;
  GlobalState state;
};

class BudgetExhausted : public std::runtime_error {
 public:
  BudgetExhausted(std::string what, std::size_t states_seen)
      : std::runtime_error(std::move(what)), states_seen_(states_seen) {}
  std::size_t states_seen() const { return states_seen_; }

 private:
  std::size_t states_seen_;
};

GlobalState initial_state(const Cpds &c);

SymbolId top_of(const Word &w);

VisibleState visible(const GlobalState &s);

/// Applies `a` to the thread state (q, w); returns false if `a` is disabled.
bool apply_action(const Action &a, SharedId q, const Word &w, SharedId &q_out,
                  Word &w_out);

/// One-step successors of `s` triggered by thread `i`, in action order.
/// Disabled actions contribute nothing.
std::vector<Successor> enabled_successors(const Cpds &c, const GlobalState &s,
                                          std::size_t i);

/// States reachable from a root using thread-i steps only, with a BFS tree.
///
/// states[0] is the root. parent[j] / action[j] describe how states[j] was
/// first discovered; the root has parent == npos.
struct ThreadClosure {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t thread = 0;
  std::vector<GlobalState> states;
  std::vector<std::size_t> parent;
  std::vector<std::size_t> action;
};

/// Throws BudgetExhausted once more than `budget` states have been seen.
ThreadClosure thread_closure(const Cpds &c, const GlobalState &s,
                             std::size_t i, std::size_t budget);

struct Diagnostic {
  std::string location;
  std::string message;
};

std::vector<Diagnostic> validate(const Cpds &c);

// Display helpers: <q|w1,w2> with words written top-first, "eps" for empty.
std::string format_word(const Cpds &c, std::size_t thread, const Word &w);
std::string format_state(const Cpds &c, const GlobalState &s);
std::string format_visible(const Cpds &c, const VisibleState &v);
std::string format_action(const Cpds &c, std::size_t thread, const Action &a);

struct GlobalStateHash {
  std::size_t operator()(const GlobalState &s) const noexcept;
};
struct VisibleStateHash {
  std::size_t operator()(const VisibleState &v) const noexcept;
};

}  // namespace cuba
