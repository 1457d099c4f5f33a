#include "pwlab/defense/mfa.h"

#include <cstdio>
#include <stdexcept>

namespace pwlab::defense {

const char* mfa_verdict_name(MfaVerdict v) {
  switch (v) {
    case MfaVerdict::ok: return "ok";
    case MfaVerdict::wrong_code: return "wrong-code";
    case MfaVerdict::expired: return "expired";
    case MfaVerdict::exhausted: return "attempts-exhausted";
    case MfaVerdict::unknown_challenge: return "unknown-challenge";
  }
  return "?";
}

MfaProvider::MfaProvider(std::uint64_t seed, std::int64_t ttl_seconds)
    : rng_(seed), ttl_(ttl_seconds) {
  if (ttl_seconds < 1) throw std::invalid_argument("mfa ttl must be >= 1s");
}

MfaChallenge MfaProvider::issue(const std::string& user_id, std::int64_t now) {
  if (user_id.empty()) throw std::invalid_argument("empty user id");
  MfaChallenge challenge;
  challenge.challenge_id = "mfa-" + std::to_string(next_id_++);
  char code[8];
  std::snprintf(code, sizeof(code), "%06u",
                static_cast<unsigned>(rng_() % 1000000));
  challenge.code = code;
  challenge.expires_at = now + ttl_;
  challenge.attempts_remaining = 3;
  open_[challenge.challenge_id] = challenge;
  return challenge;
}

MfaVerdict MfaProvider::verify(const std::string& challenge_id,
                               const std::string& submitted_code, std::int64_t now) {
  auto it = open_.find(challenge_id);
  if (it == open_.end()) return MfaVerdict::unknown_challenge;
  MfaChallenge& challenge = it->second;
  if (now >= challenge.expires_at) {
    open_.erase(it);
    return MfaVerdict::expired;
  }
  if (challenge.attempts_remaining <= 0) return MfaVerdict::exhausted;
  if (submitted_code != challenge.code) {
    challenge.attempts_remaining -= 1;
    return MfaVerdict::wrong_code;
  }
  open_.erase(it);  // codes are single use
  return MfaVerdict::ok;
}

std::optional<MfaChallenge> MfaProvider::find(const std::string& challenge_id) const {
  auto it = open_.find(challenge_id);
  if (it == open_.end()) return std::nullopt;
  return it->second;
}

}  // namespace pwlab::defense
