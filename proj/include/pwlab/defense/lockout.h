#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace pwlab::defense {

struct LockoutConfig {
  int threshold = 5;                  // consecutive failures before locking
  std::int64_t lock_seconds = 900;    // lock duration once tripped
  std::int64_t window_seconds = 1800; // idle gap after which old failures expire

  void validate() const;
};

struct LockoutState {
  int consecutive_failures = 0;
  std::int64_t last_failure_at = 0;
  std::optional<std::int64_t> locked_until;
};

enum class AttemptOutcome { success, failure };

// Clears an expired lock (resetting the counter) and forgets failures older
// than the counting window. Pure on value; callers decide where state lives.
LockoutState refresh_lockout(LockoutState state, const LockoutConfig& config,
                             std::int64_t now);

// Applies one attempt after refreshing: success resets the counter, failure
// increments it, and the threshold arms locked_until = now + lock_seconds.
LockoutState record_attempt(LockoutState state, const LockoutConfig& config,
                            AttemptOutcome outcome, std::int64_t now);

bool is_locked(const LockoutState& state, std::int64_t now);

// Per-user map with refresh-on-read semantics.
class LockoutTable {
 public:
  explicit LockoutTable(LockoutConfig config = {});

  bool is_locked(const std::string& user_id, std::int64_t now);
  // Returns the state after the attempt was applied.
  LockoutState record_attempt(const std::string& user_id, AttemptOutcome outcome,
                              std::int64_t now);
  LockoutState state(const std::string& user_id) const;
  const LockoutConfig& config() const { return config_; }

 private:
  LockoutConfig config_;
  std::map<std::string, LockoutState> states_;
};

}  // namespace pwlab::defense
