#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pwlab::defense {

// Context snapshot for one login attempt. Fields are always present;
// "unknown" is an explicit token, not an empty string.
struct RiskContext {
  std::int64_t login_time = 0;  // unix seconds
  std::string geo = "unknown";
  std::string device = "unknown";
  std::string network = "unknown";
};

// What normal looks like for one account. Hours are UTC; [begin, end) is the
// typical window, wrapping past midnight when begin > end, and begin == end
// means no hour is considered unusual.
struct RiskBaseline {
  int usual_hour_begin = 7;
  int usual_hour_end = 23;
  std::string geo = "unknown";
  std::vector<std::string> known_devices;
  std::vector<std::string> known_networks;
};

// Relative weights of the four signals; renormalized to sum to 1 before use.
struct RiskWeights {
  double time_anomaly = 0.2;
  double geo_mismatch = 0.3;
  double unknown_device = 0.3;
  double unknown_network = 0.2;
};

enum class RouteAction { password_only, require_mfa, block };

const char* route_action_name(RouteAction a);

struct RiskFactor {
  std::string signal;
  double contribution = 0.0;
};

struct RiskDecision {
  double score = 0.0;
  RouteAction action = RouteAction::password_only;
  std::vector<RiskFactor> factors;  // one entry per signal, zeros included
};

struct RouteThresholds {
  double low = 0.3;   // below: password alone suffices
  double high = 0.7;  // at or above: blocked outright
};

double risk_score(const RiskContext& context, const RiskBaseline& baseline,
                  const RiskWeights& weights,
                  std::vector<RiskFactor>* factors = nullptr);

RouteAction route_decision(double score, const RouteThresholds& thresholds);

RiskDecision assess_risk(const RiskContext& context, const RiskBaseline& baseline,
                         const RiskWeights& weights = {},
                         const RouteThresholds& thresholds = {});

}  // namespace pwlab::defense
