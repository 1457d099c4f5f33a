#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pwlab/attack/targets.h"
#include "pwlab/defense/policy.h"

namespace pwlab::bench {

enum class Randomness { dictionary, pseudo_random };

const char* randomness_name(Randomness r);
Randomness randomness_from_name(std::string_view name);

struct DatasetEntry {
  std::string password;
  defense::LengthClass complexity = defense::LengthClass::low;
  Randomness randomness = Randomness::dictionary;
  std::string rationale;
};

struct Dataset {
  std::vector<DatasetEntry> entries;
};

// Tab-separated rows: password, complexity (Low/Medium/High), randomness
// (Dictionary/PseudoRandom), rationale. No comment syntax; passwords may
// contain anything but tab. Malformed rows fail with their line number.
Dataset load_dataset(const std::filesystem::path& path,
                     std::vector<std::string>* warnings = nullptr);

// Stable identifier for entry i of a dataset: p01, p02, ...
std::string password_id(std::size_t index);

struct EmittedFiles {
  std::map<attack::AttackAlgorithm, std::filesystem::path> hashfiles;
  std::filesystem::path answer_key;
};

// One hashfile per algorithm, rows in dataset order, bcrypt salts drawn
// from the seed so reruns are byte-identical. The answer key (algorithm,
// key, id, password) exists for verification, never for the attacks.
EmittedFiles emit_hashfiles(const Dataset& dataset,
                            const std::vector<attack::AttackAlgorithm>& algorithms,
                            int bcrypt_cost, std::uint64_t seed,
                            const std::filesystem::path& output_dir);

struct AnswerKeyRow {
  attack::AttackAlgorithm algorithm;
  std::string key;  // digest hex or bcrypt record text
  std::string id;
  std::string password;
};

std::vector<AnswerKeyRow> load_answer_key(const std::filesystem::path& path);

}  // namespace pwlab::bench
