#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cuba/model.hpp"

namespace cuba {

enum class Outcome { unsafe, safe, inconclusive };

enum class Method { alg3_explicit, alg3_symbolic, scheme1_explicit, scheme1_symbolic };

enum class StopReason { none, budget, timeout, max_k, cancelled };

const char *to_string(Outcome o);
const char *to_string(Method m);
const char *to_string(StopReason r);

struct Verdict {
  Outcome outcome = Outcome::inconclusive;
  Method method = Method::alg3_explicit;

  /// Unsafe: the smallest context bound with a violation.
  /// Safe: the bound reported by the method's convergence test.
  /// Inconclusive: the last completed bound.
  std::size_t k = 0;
  /// Number of layers computed beyond the initial one.
  std::size_t round = 0;

  std::optional<VisibleState> witness;
  std::optional<Path> path;

  StopReason reason = StopReason::none;
  std::string detail;

  /// Bounds k at which a new plateau was seen but the generator test failed.
  std::vector<std::size_t> rejected_plateaus;
  /// Visible states new at each bound, index 0 holding the initial one.
  std::vector<std::vector<VisibleState>> visible_deltas;
};

struct Budgets {
  std::size_t max_k = 20;
  std::size_t closure_states = 1000000;
  std::size_t layer_states = 10000;
  double timeout_seconds = 1800;
};

/// Shared between racing workers. Workers poll it between rounds.
class RunControl {
 public:
  using Clock = std::chrono::steady_clock;

  explicit RunControl(double timeout_seconds = 0);

  void cancel() { cancelled_ = true; }
  /// Lowers the last round anyone still needs to compute.
  void limit_rounds(std::size_t round);
  std::size_t round_limit() const { return round_limit_; }

  bool timed_out() const;
  /// Reason to stop before computing `round`, or StopReason::none.
  StopReason check(std::size_t round) const;

 private:
  std::atomic<bool> cancelled_{false};
  std::atomic<std::size_t> round_limit_{std::numeric_limits<std::size_t>::max()};
  std::optional<Clock::time_point> deadline_;
};

}  // namespace cuba
