#include "pwlab/defense/risk.h"

#include <algorithm>
#include <stdexcept>

namespace pwlab::defense {

namespace {

int utc_hour(std::int64_t unix_seconds) {
  std::int64_t seconds_of_day = ((unix_seconds % 86400) + 86400) % 86400;
  return static_cast<int>(seconds_of_day / 3600);
}

bool hour_is_usual(int hour, const RiskBaseline& baseline) {
  int begin = baseline.usual_hour_begin;
  int end = baseline.usual_hour_end;
  if (begin < 0 || begin > 23 || end < 0 || end > 23)
    throw std::invalid_argument("baseline hours must be in [0, 23]");
  if (begin == end) return true;
  if (begin < end) return hour >= begin && hour < end;
  return hour >= begin || hour < end;  // window wraps past midnight
}

bool contains(const std::vector<std::string>& haystack, const std::string& needle) {
  return std::find(haystack.begin(), haystack.end(), needle) != haystack.end();
}

}  // namespace

const char* route_action_name(RouteAction a) {
  switch (a) {
    case RouteAction::password_only: return "PasswordOnly";
    case RouteAction::require_mfa: return "RequireMFA";
    case RouteAction::block: return "Block";
  }
  return "?";
}

double risk_score(const RiskContext& context, const RiskBaseline& baseline,
                  const RiskWeights& weights, std::vector<RiskFactor>* factors) {
  double total = weights.time_anomaly + weights.geo_mismatch +
                 weights.unknown_device + weights.unknown_network;
  if (total <= 0.0) throw std::invalid_argument("risk weights must sum to > 0");

  struct Signal {
    const char* name;
    bool fired;
    double weight;
  };
  const Signal signals[] = {
      {"time-anomaly", !hour_is_usual(utc_hour(context.login_time), baseline),
       weights.time_anomaly},
      {"geo-mismatch", context.geo != baseline.geo, weights.geo_mismatch},
      {"unknown-device", !contains(baseline.known_devices, context.device),
       weights.unknown_device},
      {"unknown-network", !contains(baseline.known_networks, context.network),
       weights.unknown_network},
  };

  double score = 0.0;
  for (const Signal& s : signals) {
    double contribution = s.fired ? s.weight / total : 0.0;
    score += contribution;
    if (factors) factors->push_back({s.name, contribution});
  }
  return score;
}

RouteAction route_decision(double score, const RouteThresholds& thresholds) {
  if (!(thresholds.low >= 0.0 && thresholds.low < thresholds.high &&
        thresholds.high <= 1.0))
    throw std::invalid_argument("thresholds must satisfy 0 <= low < high <= 1");
  if (score < thresholds.low) return RouteAction::password_only;
  if (score < thresholds.high) return RouteAction::require_mfa;
  return RouteAction::block;
}

RiskDecision assess_risk(const RiskContext& context, const RiskBaseline& baseline,
                         const RiskWeights& weights, const RouteThresholds& thresholds) {
  RiskDecision decision;
  decision.score = risk_score(context, baseline, weights, &decision.factors);
  decision.action = route_decision(decision.score, thresholds);
  return decision;
}

}  // namespace pwlab::defense
