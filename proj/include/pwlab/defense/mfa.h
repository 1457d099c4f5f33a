#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>

namespace pwlab::defense {

struct MfaChallenge {
  std::string challenge_id;
  std::string code;  // 6 decimal digits
  std::int64_t expires_at = 0;
  int attempts_remaining = 3;
};

enum class MfaVerdict { ok, wrong_code, expired, exhausted, unknown_challenge };

const char* mfa_verdict_name(MfaVerdict v);

// Simulated one-time-code provider. Codes never leave the process; tests and
// the demo read them back through find() instead of a delivery channel.
class MfaProvider {
 public:
  explicit MfaProvider(std::uint64_t seed, std::int64_t ttl_seconds = 90);

  MfaChallenge issue(const std::string& user_id, std::int64_t now);
  MfaVerdict verify(const std::string& challenge_id, const std::string& submitted_code,
                    std::int64_t now);
  std::optional<MfaChallenge> find(const std::string& challenge_id) const;
  std::int64_t ttl_seconds() const { return ttl_; }

 private:
  std::mt19937_64 rng_;
  std::int64_t ttl_;
  std::uint64_t next_id_ = 1;
  std::map<std::string, MfaChallenge> open_;
};

}  // namespace pwlab::defense
