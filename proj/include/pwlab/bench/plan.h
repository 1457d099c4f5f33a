#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pwlab/attack/targets.h"

namespace pwlab::bench {

enum class AttackKind { brute, dictionary };

const char* attack_kind_name(AttackKind k);

struct AttackSpec {
  std::string name;
  AttackKind kind = AttackKind::brute;
  // brute
  std::string charset = "mixed69";
  std::size_t min_len = 1;
  std::size_t max_len = 4;
  // dictionary
  std::filesystem::path wordlist;
  std::string rules;  // rule tokens, comma separated
  // shared; bcrypt gets its own budget because each guess is so much dearer
  double budget_seconds = 60;
  double bcrypt_budget_seconds = 600;
};

struct ExperimentPlan {
  std::filesystem::path plan_path;
  std::filesystem::path dataset_path;
  std::filesystem::path output_dir;
  std::vector<attack::AttackAlgorithm> algorithms;
  int bcrypt_cost = 10;
  std::uint64_t seed = 1;
  double checkpoint_seconds = 10;
  std::size_t workers = 1;
  std::vector<AttackSpec> attacks;
};

// Line-oriented `key = value` with one `[attack NAME]` section per attack;
// '#' starts a comment, blank lines are ignored, relative paths resolve
// against the plan file's directory. Global keys: dataset, output_dir,
// algorithms, bcrypt_cost, seed, checkpoint_seconds, workers. Attack keys:
// kind, charset, min_len, max_len, wordlist, rules, budget_seconds,
// bcrypt_budget_seconds.
ExperimentPlan load_plan(const std::filesystem::path& path);

// Structural checks shared by load_plan and run_experiment: at least one
// algorithm and one attack, parseable charsets and rules, readable
// wordlists, sane numbers.
void validate_plan(const ExperimentPlan& plan);

}  // namespace pwlab::bench
