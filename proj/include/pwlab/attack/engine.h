#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <string>
#include <vector>

#include "pwlab/attack/keyspace.h"
#include "pwlab/attack/rules.h"
#include "pwlab/attack/targets.h"

namespace pwlab::attack {

struct CheckpointRate {
  double offset_seconds = 0;
  double guesses_per_second = 0;  // over the interval since the previous checkpoint
};

// A guess is one hash computation: one per candidate for digest targets,
// one per (candidate, record) pair for bcrypt targets.
struct AttackReport {
  std::map<std::string, std::string> cracked;    // target key -> plaintext
  std::map<std::string, double> crack_elapsed;   // target key -> seconds from start
  std::uint64_t guesses = 0;
  double elapsed_seconds = 0;
  std::vector<CheckpointRate> checkpoint_rates;
  bool exhausted = false;  // search space fully enumerated within budget
};

struct EngineOptions {
  std::size_t workers = 1;
  double budget_seconds = 0;  // 0 = no budget
  double checkpoint_seconds = 60;
  // Invoked as soon as a target falls, before the run finishes.
  std::function<void(const std::string& key, const std::string& plaintext)> on_crack;
  // Target keys already solved elsewhere; their slots are not attacked.
  std::vector<std::string> skip_keys;
};

// Stride-partitioned exhaustive search: worker w of W takes candidate
// indices w, w+W, w+2W, ... in enumeration order. Stops early once every
// slot is cracked or the budget runs out.
AttackReport brute_force(const TargetSet& targets, const Charset& charset,
                         const LengthRange& range, const EngineOptions& options = {});

// Streams words off the list, expands each through the ruleset (an empty
// ruleset acts as identity) and tests every variant.
AttackReport dictionary_attack(const TargetSet& targets, std::istream& wordlist,
                               const RuleSet& rules, const EngineOptions& options = {});

}  // namespace pwlab::attack
