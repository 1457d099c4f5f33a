#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pwlab/defense/honeychecker.h"
#include "pwlab/defense/lockout.h"
#include "pwlab/defense/mfa.h"
#include "pwlab/defense/risk.h"
#include "pwlab/defense/store.h"

namespace pwlab::defense {

enum class AuthEventKind {
  success,
  failure,
  honeyword_alert,
  locked,
  mfa_issued,
  mfa_failed,
  blocked,
};

const char* auth_event_kind_name(AuthEventKind k);

struct AuthEvent {
  AuthEventKind kind;
  std::string user_id;
  std::int64_t timestamp = 0;
  std::string detail;
};

// Append-only log; sensitive kinds (honeyword alerts) live here and are
// never echoed to the caller.
class EventLog {
 public:
  void append(AuthEvent event);
  const std::vector<AuthEvent>& entries() const { return entries_; }
  std::size_t count(AuthEventKind kind) const;
  std::optional<AuthEvent> last() const;

 private:
  std::vector<AuthEvent> entries_;
};

// What the caller is allowed to see. Every internal failure mode collapses
// into generic_failure.
enum class AuthResponse { ok, mfa_required, generic_failure };

const char* auth_response_name(AuthResponse r);

struct AuthResult {
  AuthResponse response = AuthResponse::generic_failure;
  std::optional<std::string> mfa_challenge_id;  // set iff response == mfa_required
};

struct AuthConfig {
  LockoutConfig lockout;
  RiskWeights weights;
  RouteThresholds thresholds;
  std::int64_t mfa_ttl_seconds = 90;
  int dummy_cost = 10;  // spent on unknown users so timing matches a real row
};

// Fixed pipeline: lockout gate, bcrypt match against all k sweetwords,
// honeychecker index check, risk scoring, routing. Exactly one terminal
// event is appended per call.
class Authenticator {
 public:
  Authenticator(CredentialStore& store, Honeychecker& checker, AuthConfig config,
                std::uint64_t seed);

  AuthResult authenticate(const std::string& user_id, std::string_view password,
                          const RiskContext& context, const RiskBaseline& baseline,
                          std::int64_t now);

  // Second step after mfa_required. Success completes the login.
  AuthResult verify_mfa(const std::string& user_id, const std::string& challenge_id,
                        const std::string& code, std::int64_t now);

  EventLog& events() { return log_; }
  const EventLog& events() const { return log_; }
  LockoutTable& lockouts() { return lockouts_; }
  MfaProvider& mfa() { return mfa_; }

 private:
  CredentialStore& store_;
  Honeychecker& checker_;
  AuthConfig config_;
  LockoutTable lockouts_;
  MfaProvider mfa_;
  EventLog log_;
  crypto::BcryptRecord dummy_record_;

  AuthResult fail(AuthEventKind kind, const std::string& user_id, std::int64_t now,
                  std::string detail);
};

}  // namespace pwlab::defense
