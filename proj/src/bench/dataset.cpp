#include "pwlab/bench/dataset.h"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pwlab/crypto/hash.h"

namespace pwlab::bench {

const char* randomness_name(Randomness r) {
  switch (r) {
    case Randomness::dictionary: return "Dictionary";
    case Randomness::pseudo_random: return "PseudoRandom";
  }
  return "?";
}

Randomness randomness_from_name(std::string_view name) {
  if (name == "Dictionary") return Randomness::dictionary;
  if (name == "PseudoRandom") return Randomness::pseudo_random;
  throw std::invalid_argument("unknown randomness label: " + std::string(name));
}

Dataset load_dataset(const std::filesystem::path& path,
                     std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read dataset: " + path.string());

  Dataset dataset;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    auto bad = [&](const std::string& why) {
      return std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                ": " + why);
    };
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 4)
      throw bad("expected 4 tab-separated fields, got " +
                std::to_string(fields.size()));
    if (fields[0].empty()) throw bad("empty password");

    DatasetEntry entry;
    entry.password = fields[0];
    try {
      entry.complexity = defense::length_class_from_name(fields[1]);
      entry.randomness = randomness_from_name(fields[2]);
    } catch (const std::invalid_argument& e) {
      throw bad(e.what());
    }
    entry.rationale = fields[3];
    dataset.entries.push_back(std::move(entry));
  }
  if (dataset.entries.empty() && warnings)
    warnings->push_back("dataset " + path.string() + " is empty");
  return dataset;
}

std::string password_id(std::size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "p%02zu", index + 1);
  return buf;
}

EmittedFiles emit_hashfiles(const Dataset& dataset,
                            const std::vector<attack::AttackAlgorithm>& algorithms,
                            int bcrypt_cost, std::uint64_t seed,
                            const std::filesystem::path& output_dir) {
  std::filesystem::create_directories(output_dir);

  EmittedFiles emitted;
  emitted.answer_key = output_dir / "answer_key.tsv";
  std::ofstream key_out(emitted.answer_key, std::ios::trunc);
  if (!key_out)
    throw std::runtime_error("cannot write " + emitted.answer_key.string());

  for (attack::AttackAlgorithm alg : algorithms) {
    std::filesystem::path file =
        output_dir / (std::string(attack::attack_algorithm_name(alg)) + ".txt");
    std::ofstream out(file, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + file.string());

    // One generator per algorithm keeps bcrypt salts independent of which
    // other algorithms were requested.
    std::mt19937_64 salt_rng(seed ^ 0xb2c3a51f00d5eedULL);

    for (std::size_t i = 0; i < dataset.entries.size(); ++i) {
      const std::string& password = dataset.entries[i].password;
      std::string key;
      switch (alg) {
        case attack::AttackAlgorithm::md5:
          key = crypto::md5(password).hex();
          break;
        case attack::AttackAlgorithm::sha256:
          key = crypto::sha256(password).hex();
          break;
        case attack::AttackAlgorithm::bcrypt: {
          auto salt = crypto::random_bcrypt_salt(salt_rng());
          key = crypto::format_bcrypt(crypto::bcrypt_hash(password, salt, bcrypt_cost));
          break;
        }
      }
      out << key << '\n';
      key_out << attack::attack_algorithm_name(alg) << '\t' << key << '\t'
              << password_id(i) << '\t' << password << '\n';
    }
    if (!out.flush()) throw std::runtime_error("cannot write " + file.string());
    emitted.hashfiles[alg] = file;
  }
  if (!key_out.flush())
    throw std::runtime_error("cannot write " + emitted.answer_key.string());
  return emitted;
}

std::vector<AnswerKeyRow> load_answer_key(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read answer key: " + path.string());
  std::vector<AnswerKeyRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    AnswerKeyRow row;
    std::string alg;
    if (!std::getline(fields, alg, '\t') || !std::getline(fields, row.key, '\t') ||
        !std::getline(fields, row.id, '\t') || !std::getline(fields, row.password))
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": malformed answer-key row");
    row.algorithm = attack::attack_algorithm_from_name(alg);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace pwlab::bench
