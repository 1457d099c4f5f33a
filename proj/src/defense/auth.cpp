#include "pwlab/defense/auth.h"

#include <cstdio>

namespace pwlab::defense {

const char* auth_event_kind_name(AuthEventKind k) {
  switch (k) {
    case AuthEventKind::success: return "Success";
    case AuthEventKind::failure: return "Failure";
    case AuthEventKind::honeyword_alert: return "HoneywordAlert";
    case AuthEventKind::locked: return "Locked";
    case AuthEventKind::mfa_issued: return "MfaIssued";
    case AuthEventKind::mfa_failed: return "MfaFailed";
    case AuthEventKind::blocked: return "Blocked";
  }
  return "?";
}

const char* auth_response_name(AuthResponse r) {
  switch (r) {
    case AuthResponse::ok: return "Ok";
    case AuthResponse::mfa_required: return "MfaRequired";
    case AuthResponse::generic_failure: return "GenericFailure";
  }
  return "?";
}

void EventLog::append(AuthEvent event) { entries_.push_back(std::move(event)); }

std::size_t EventLog::count(AuthEventKind kind) const {
  std::size_t n = 0;
  for (const auto& e : entries_)
    if (e.kind == kind) ++n;
  return n;
}

std::optional<AuthEvent> EventLog::last() const {
  if (entries_.empty()) return std::nullopt;
  return entries_.back();
}

Authenticator::Authenticator(CredentialStore& store, Honeychecker& checker,
                             AuthConfig config, std::uint64_t seed)
    : store_(store),
      checker_(checker),
      config_(config),
      lockouts_(config.lockout),
      mfa_(seed, config.mfa_ttl_seconds) {
  auto salt = crypto::random_bcrypt_salt(seed ^ 0x64756d6d79726f77ULL);
  dummy_record_ = crypto::bcrypt_hash("open sesame", salt, config_.dummy_cost);
}

AuthResult Authenticator::fail(AuthEventKind kind, const std::string& user_id,
                               std::int64_t now, std::string detail) {
  log_.append({kind, user_id, now, std::move(detail)});
  return {AuthResponse::generic_failure, std::nullopt};
}

AuthResult Authenticator::authenticate(const std::string& user_id,
                                       std::string_view password,
                                       const RiskContext& context,
                                       const RiskBaseline& baseline,
                                       std::int64_t now) {
  if (lockouts_.is_locked(user_id, now))
    return fail(AuthEventKind::locked, user_id, now, "attempt while locked");

  std::optional<CredentialRecord> record = store_.find(user_id);
  if (!record) {
    // Burn one bcrypt so unknown and wrong-password answers take similar time.
    crypto::bcrypt_verify(password, dummy_record_);
    lockouts_.record_attempt(user_id, AttemptOutcome::failure, now);
    return fail(AuthEventKind::failure, user_id, now, "unknown user");
  }

  // Check every sweetword; no early exit, so timing does not leak position.
  std::optional<std::uint32_t> matched;
  for (std::size_t i = 0; i < record->sweetwords.size(); ++i)
    if (crypto::bcrypt_verify(password, record->sweetwords[i]) && !matched)
      matched = static_cast<std::uint32_t>(i);

  if (!matched) {
    LockoutState state = lockouts_.record_attempt(user_id, AttemptOutcome::failure, now);
    if (state.locked_until)
      return fail(AuthEventKind::locked, user_id, now,
                  "failure threshold reached, locked until " +
                      std::to_string(*state.locked_until));
    return fail(AuthEventKind::failure, user_id, now, "password mismatch");
  }

  CheckResult verdict;
  try {
    verdict = checker_.check(user_id, *matched, now);
  } catch (const CheckerError& e) {
    return fail(AuthEventKind::blocked, user_id, now,
                "honeychecker unavailable (" + e.code() + "), failing closed");
  }

  if (verdict == CheckResult::decoy) {
    // Deliberate: a decoy is an attacker holding cracked store contents, not
    // a typo, so the lockout counter stays put and the caller learns nothing.
    return fail(AuthEventKind::honeyword_alert, user_id, now,
                "sweetword index " + std::to_string(*matched) + " is a decoy");
  }

  lockouts_.record_attempt(user_id, AttemptOutcome::success, now);
  RiskDecision risk = assess_risk(context, baseline, config_.weights, config_.thresholds);

  char score_text[32];
  std::snprintf(score_text, sizeof(score_text), "%.2f", risk.score);

  switch (risk.action) {
    case RouteAction::password_only:
      log_.append({AuthEventKind::success, user_id, now,
                   std::string("risk ") + score_text + ", password only"});
      return {AuthResponse::ok, std::nullopt};
    case RouteAction::require_mfa: {
      MfaChallenge challenge = mfa_.issue(user_id, now);
      log_.append({AuthEventKind::mfa_issued, user_id, now,
                   std::string("risk ") + score_text + ", challenge " +
                       challenge.challenge_id});
      return {AuthResponse::mfa_required, challenge.challenge_id};
    }
    case RouteAction::block:
      break;
  }
  return fail(AuthEventKind::blocked, user_id, now,
              std::string("risk ") + score_text + " at or above block threshold");
}

AuthResult Authenticator::verify_mfa(const std::string& user_id,
                                     const std::string& challenge_id,
                                     const std::string& code, std::int64_t now) {
  MfaVerdict verdict = mfa_.verify(challenge_id, code, now);
  if (verdict == MfaVerdict::ok) {
    log_.append({AuthEventKind::success, user_id, now,
                 "mfa challenge " + challenge_id + " passed"});
    return {AuthResponse::ok, std::nullopt};
  }
  return fail(AuthEventKind::mfa_failed, user_id, now,
              std::string("mfa ") + mfa_verdict_name(verdict));
}

}  // namespace pwlab::defense
