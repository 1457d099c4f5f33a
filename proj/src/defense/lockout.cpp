#include "pwlab/defense/lockout.h"

#include <stdexcept>

namespace pwlab::defense {

void LockoutConfig::validate() const {
  if (threshold < 1) throw std::invalid_argument("lockout threshold must be >= 1");
  if (lock_seconds < 1) throw std::invalid_argument("lock duration must be >= 1s");
  if (window_seconds < 1) throw std::invalid_argument("counter window must be >= 1s");
}

LockoutState refresh_lockout(LockoutState state, const LockoutConfig& config,
                             std::int64_t now) {
  if (state.locked_until && now >= *state.locked_until) {
    state.locked_until.reset();
    state.consecutive_failures = 0;
  }
  if (!state.locked_until && state.consecutive_failures > 0 &&
      now - state.last_failure_at > config.window_seconds)
    state.consecutive_failures = 0;
  return state;
}

LockoutState record_attempt(LockoutState state, const LockoutConfig& config,
                            AttemptOutcome outcome, std::int64_t now) {
  config.validate();
  state = refresh_lockout(state, config, now);
  if (outcome == AttemptOutcome::success) {
    state.consecutive_failures = 0;
    state.locked_until.reset();
    return state;
  }
  state.consecutive_failures += 1;
  state.last_failure_at = now;
  if (state.consecutive_failures >= config.threshold)
    state.locked_until = now + config.lock_seconds;
  return state;
}

bool is_locked(const LockoutState& state, std::int64_t now) {
  return state.locked_until && now < *state.locked_until;
}

LockoutTable::LockoutTable(LockoutConfig config) : config_(config) {
  config_.validate();
}

bool LockoutTable::is_locked(const std::string& user_id, std::int64_t now) {
  auto it = states_.find(user_id);
  if (it == states_.end()) return false;
  it->second = refresh_lockout(it->second, config_, now);
  return defense::is_locked(it->second, now);
}

LockoutState LockoutTable::record_attempt(const std::string& user_id,
                                          AttemptOutcome outcome, std::int64_t now) {
  LockoutState& state = states_[user_id];
  state = defense::record_attempt(state, config_, outcome, now);
  return state;
}

LockoutState LockoutTable::state(const std::string& user_id) const {
  auto it = states_.find(user_id);
  return it == states_.end() ? LockoutState{} : it->second;
}

}  // namespace pwlab::defense
