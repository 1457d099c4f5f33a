#include "pwlab/bench/plan.h"

#include <fstream>
#include <stdexcept>

#include "pwlab/attack/keyspace.h"
#include "pwlab/attack/rules.h"

namespace pwlab::bench {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t comma = value.find(',', start);
    std::string item = trim(value.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

const char* attack_kind_name(AttackKind k) {
  switch (k) {
    case AttackKind::brute: return "brute";
    case AttackKind::dictionary: return "dictionary";
  }
  return "?";
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read plan: " + path.string());
  std::filesystem::path base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path candidate(p);
    return candidate.is_absolute() ? candidate : base / candidate;
  };

  ExperimentPlan plan;
  plan.plan_path = path;
  AttackSpec* current = nullptr;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto bad = [&](const std::string& why) {
      return std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                ": " + why);
    };
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string text = trim(line);
    if (text.empty()) continue;

    if (text.front() == '[') {
      if (text.back() != ']') throw bad("unterminated section header");
      std::string header = trim(text.substr(1, text.size() - 2));
      if (header.rfind("attack", 0) != 0)
        throw bad("unknown section [" + header + "]");
      std::string name = trim(header.substr(6));
      if (name.empty()) throw bad("attack section needs a name");
      for (const auto& a : plan.attacks)
        if (a.name == name) throw bad("duplicate attack name " + name);
      plan.attacks.emplace_back();
      plan.attacks.back().name = name;
      current = &plan.attacks.back();
      continue;
    }

    std::size_t eq = text.find('=');
    if (eq == std::string::npos) throw bad("expected key = value");
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    if (key.empty() || value.empty()) throw bad("expected key = value");

    try {
      if (!current) {
        if (key == "dataset") plan.dataset_path = resolve(value);
        else if (key == "output_dir") plan.output_dir = resolve(value);
        else if (key == "algorithms") {
          for (const auto& name : split_list(value))
            plan.algorithms.push_back(attack::attack_algorithm_from_name(name));
        } else if (key == "bcrypt_cost") plan.bcrypt_cost = std::stoi(value);
        else if (key == "seed") plan.seed = std::stoull(value);
        else if (key == "checkpoint_seconds") plan.checkpoint_seconds = std::stod(value);
        else if (key == "workers") plan.workers = std::stoul(value);
        else throw bad("unknown global key " + key);
      } else {
        if (key == "kind") {
          if (value == "brute") current->kind = AttackKind::brute;
          else if (value == "dictionary") current->kind = AttackKind::dictionary;
          else throw bad("unknown attack kind " + value);
        } else if (key == "charset") current->charset = value;
        else if (key == "min_len") current->min_len = std::stoul(value);
        else if (key == "max_len") current->max_len = std::stoul(value);
        else if (key == "wordlist") current->wordlist = resolve(value);
        else if (key == "rules") current->rules = value;
        else if (key == "budget_seconds") current->budget_seconds = std::stod(value);
        else if (key == "bcrypt_budget_seconds")
          current->bcrypt_budget_seconds = std::stod(value);
        else throw bad("unknown attack key " + key);
      }
    } catch (const std::logic_error&) {
      throw bad("bad value '" + value + "' for " + key);
    }
  }

  validate_plan(plan);
  return plan;
}

void validate_plan(const ExperimentPlan& plan) {
  auto bad = [&](const std::string& why) {
    return std::runtime_error("plan " + plan.plan_path.string() + ": " + why);
  };
  if (plan.dataset_path.empty()) throw bad("missing dataset");
  if (plan.output_dir.empty()) throw bad("missing output_dir");
  if (plan.algorithms.empty()) throw bad("needs at least one algorithm");
  if (plan.attacks.empty()) throw bad("needs at least one attack");
  if (plan.bcrypt_cost < crypto::kBcryptMinCost ||
      plan.bcrypt_cost > crypto::kBcryptMaxCost)
    throw bad("bcrypt_cost out of range");
  if (plan.checkpoint_seconds <= 0) throw bad("checkpoint_seconds must be > 0");
  if (plan.workers < 1) throw bad("workers must be >= 1");

  for (const auto& attack : plan.attacks) {
    if (attack.budget_seconds <= 0 || attack.bcrypt_budget_seconds <= 0)
      throw bad("attack " + attack.name + ": budgets must be > 0");
    if (attack.kind == AttackKind::brute) {
      attack::Charset::parse(attack.charset);  // throws if malformed
      attack::validate_range({attack.min_len, attack.max_len});
    } else {
      if (attack.wordlist.empty())
        throw bad("attack " + attack.name + ": dictionary kind needs a wordlist");
      std::ifstream probe(attack.wordlist);
      if (!probe)
        throw bad("attack " + attack.name + ": wordlist not readable: " +
                  attack.wordlist.string());
      attack::RuleSet::parse(attack.rules);  // throws if malformed
    }
  }
}

}  // namespace pwlab::bench
