#pragma once

#include <cstdint>
#include <string>

#include "pwlab/attack/keyspace.h"
#include "pwlab/attack/targets.h"

namespace pwlab::attack {

struct ThroughputSample {
  double guesses_per_second = 0;
  std::uint64_t guesses = 0;
  double seconds = 0;
};

// Hashes synthetic candidates flat out for roughly duration_seconds across
// the given number of worker threads. bcrypt_cost is ignored for digests.
ThroughputSample measure_throughput(AttackAlgorithm algorithm, int bcrypt_cost,
                                    double duration_seconds, std::size_t workers);

// Ceiling of keyspace / rate, computed exactly on integers (the rate is
// taken at microguess resolution, so 4761 guesses at 4761.0 g/s is 1s, not 2).
BigInt estimate_seconds(const BigInt& keyspace, double guesses_per_second);

// 45 -> "45s", 352 -> "5min52s", 16020 -> "4h27min", large values in days
// or years.
std::string format_duration(const BigInt& seconds);
std::string format_duration(double seconds);

}  // namespace pwlab::attack
