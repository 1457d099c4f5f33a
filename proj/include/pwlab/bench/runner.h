#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pwlab/attack/engine.h"
#include "pwlab/bench/plan.h"

namespace pwlab::bench {

enum class RunOutcome { cracked, not_cracked, estimated };

const char* run_outcome_name(RunOutcome o);
RunOutcome run_outcome_from_name(std::string_view name);

// One cell of the experiment matrix: a single password under a single
// (algorithm, attack) pair. The run-level numbers (checkpoints, totals) are
// repeated on every record of the pair so each record stands alone.
struct RunRecord {
  std::string password_id;
  std::string password;
  attack::AttackAlgorithm algorithm = attack::AttackAlgorithm::md5;
  std::string attack_name;
  AttackKind attack_kind = AttackKind::brute;
  std::string charset;       // brute only
  std::size_t min_len = 0;   // brute only
  std::size_t max_len = 0;   // brute only
  std::string target_key;
  RunOutcome outcome = RunOutcome::not_cracked;
  double crack_seconds = 0;      // cracked
  double budget_seconds = 0;     // budget in force for this pair
  double projected_seconds = 0;  // estimated
  std::string rate_basis;        // how the projection rate was obtained
  bool search_exhausted = false; // the pair's run swept its whole space
  std::vector<attack::CheckpointRate> checkpoint_rates;
  double run_elapsed_seconds = 0;
  std::uint64_t run_guesses = 0;
};

std::string record_to_json(const RunRecord& record);
RunRecord record_from_json(const std::string& line);

std::vector<RunRecord> load_records(const std::filesystem::path& jsonl_path);

// The rate a projection for this record's run would use: mean of the
// trailing five checkpoint rates, falling back to the overall run rate
// when no checkpoint completed.
double projection_rate(const RunRecord& record, std::string* basis = nullptr);

struct ExperimentResult {
  std::vector<RunRecord> records;
  std::filesystem::path records_path;
  std::filesystem::path output_dir;
};

// Executes every algorithm x attack pair of the plan. Progress is journaled
// record by record into records.jsonl, cracks additionally land in a
// per-pair potfile, and a finished pair leaves a done marker, so a killed
// run resumes where it stopped instead of re-cracking. One run at a time
// per output directory (pid lockfile; stale locks from dead processes are
// reclaimed).
ExperimentResult run_experiment(const ExperimentPlan& plan);

}  // namespace pwlab::bench
