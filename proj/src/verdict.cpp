#include "cuba/verdict.hpp"

namespace cuba {

const char *to_string(Outcome o) {
  switch (o) {
    case Outcome::unsafe: return "unsafe";
    case Outcome::safe: return "safe";
    case Outcome::inconclusive: return "inconclusive";
  }
  return "?";
}

const char *to_string(Method m) {
  switch (m) {
    case Method::alg3_explicit: return "alg3-explicit";
    case Method::alg3_symbolic: return "alg3-symbolic";
    case Method::scheme1_explicit: return "scheme1-explicit";
    case Method::scheme1_symbolic: return "scheme1-symbolic";
  }
  return "?";
}

const char *to_string(StopReason r) {
  switch (r) {
    case StopReason::none: return "none";
    case StopReason::budget: return "budget";
    case StopReason::timeout: return "timeout";
    case StopReason::max_k: return "max-k";
    case StopReason::cancelled: return "cancelled";
  }
  return "?";
}

RunControl::RunControl(double timeout_seconds) {
  if (timeout_seconds > 0)
    deadline_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                   std::chrono::duration<double>(timeout_seconds));
}

void RunControl::limit_rounds(std::size_t round) {
  std::size_t cur = round_limit_.load();
  while (round < cur && !round_limit_.compare_exchange_weak(cur, round)) {
  }
}

bool RunControl::timed_out() const {
  return deadline_ && Clock::now() >= *deadline_;
}

StopReason RunControl::check(std::size_t round) const {
  if (cancelled_) return StopReason::cancelled;
  if (round > round_limit_) return StopReason::cancelled;
  if (timed_out()) return StopReason::timeout;
  return StopReason::none;
}

}  // namespace cuba
