#pragma once

#include <algorithm>
#include <chrono>
#include <thread>

#include "dict2wic/errors.hpp"

namespace dict2wic {

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{30000};
};

// Runs `attempt` until it succeeds, retrying transient BackendError and any
// ProtocolError with exponential backoff. The last error is rethrown once
// the retry budget is spent.
template <typename F>
auto with_retries(const RetryPolicy& policy, F&& attempt)
    -> decltype(attempt()) {
  auto delay = policy.initial_backoff;
  for (int tries = 0;; ++tries) {
    try {
      return attempt();
    } catch (const BackendError& e) {
      if (!e.transient() || tries >= policy.max_retries) throw;
    } catch (const ProtocolError&) {
      if (tries >= policy.max_retries) throw;
    }
    if (delay.count() > 0) std::this_thread::sleep_for(delay);
    const auto scaled = static_cast<long long>(
        static_cast<double>(delay.count()) * policy.multiplier);
    delay = std::min(policy.max_backoff, std::chrono::milliseconds(scaled));
  }
}

}  // namespace dict2wic
