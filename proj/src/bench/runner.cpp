#include "pwlab/bench/runner.h"

#include <fcntl.h>
#include <signal.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "pwlab/attack/keyspace.h"
#include "pwlab/attack/potfile.h"
#include "pwlab/attack/rules.h"
#include "pwlab/attack/throughput.h"
#include "pwlab/bench/dataset.h"

namespace pwlab::bench {

namespace {

using nlohmann::json;

class LockFile {
 public:
  explicit LockFile(const std::filesystem::path& path) : path_(path) {
    for (int attempt = 0; attempt < 2; ++attempt) {
      int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
      if (fd >= 0) {
        std::string pid = std::to_string(::getpid()) + "\n";
        [[maybe_unused]] ssize_t n = ::write(fd, pid.data(), pid.size());
        ::close(fd);
        held_ = true;
        return;
      }
      if (errno != EEXIST)
        throw std::runtime_error("cannot create lockfile " + path_.string() + ": " +
                                 std::strerror(errno));
      // Reclaim the lock if the owner is gone (killed run).
      std::ifstream in(path_);
      pid_t owner = 0;
      if (in >> owner; owner > 0 && ::kill(owner, 0) == 0 && owner != ::getpid())
        throw std::runtime_error("output dir busy: " + path_.string() +
                                 " held by pid " + std::to_string(owner));
      ::unlink(path_.c_str());
    }
    throw std::runtime_error("cannot acquire lockfile " + path_.string());
  }

  ~LockFile() {
    if (held_) ::unlink(path_.c_str());
  }

  LockFile(const LockFile&) = delete;
  LockFile& operator=(const LockFile&) = delete;

 private:
  std::filesystem::path path_;
  bool held_ = false;
};

std::string pair_slug(attack::AttackAlgorithm alg, const std::string& attack_name) {
  return std::string(attack::attack_algorithm_name(alg)) + "-" + attack_name;
}

double trailing_mean_rate(const std::vector<attack::CheckpointRate>& rates,
                          std::uint64_t guesses, double elapsed,
                          std::string* basis) {
  if (rates.empty()) {
    double overall = elapsed > 0 ? static_cast<double>(guesses) / elapsed : 0.0;
    if (basis) *basis = "overall rate, no checkpoints completed";
    return overall;
  }
  std::size_t take = rates.size() < 5 ? rates.size() : 5;
  double sum = 0;
  for (std::size_t i = rates.size() - take; i < rates.size(); ++i)
    sum += rates[i].guesses_per_second;
  if (basis)
    *basis = "mean of trailing " + std::to_string(take) + " checkpoint rates";
  return sum / static_cast<double>(take);
}

json rates_to_json(const std::vector<attack::CheckpointRate>& rates) {
  json out = json::array();
  for (const auto& r : rates)
    out.push_back({{"offset_seconds", r.offset_seconds},
                   {"guesses_per_second", r.guesses_per_second}});
  return out;
}

std::vector<attack::CheckpointRate> rates_from_json(const json& arr) {
  std::vector<attack::CheckpointRate> out;
  for (const auto& r : arr)
    out.push_back({r.at("offset_seconds").get<double>(),
                   r.at("guesses_per_second").get<double>()});
  return out;
}

}  // namespace

const char* run_outcome_name(RunOutcome o) {
  switch (o) {
    case RunOutcome::cracked: return "cracked";
    case RunOutcome::not_cracked: return "not_cracked";
    case RunOutcome::estimated: return "estimated";
  }
  return "?";
}

RunOutcome run_outcome_from_name(std::string_view name) {
  if (name == "cracked") return RunOutcome::cracked;
  if (name == "not_cracked") return RunOutcome::not_cracked;
  if (name == "estimated") return RunOutcome::estimated;
  throw std::invalid_argument("unknown outcome: " + std::string(name));
}

std::string record_to_json(const RunRecord& r) {
  json j{{"password_id", r.password_id},
         {"password", r.password},
         {"algorithm", attack::attack_algorithm_name(r.algorithm)},
         {"attack_name", r.attack_name},
         {"attack_kind", attack_kind_name(r.attack_kind)},
         {"target_key", r.target_key},
         {"outcome", run_outcome_name(r.outcome)},
         {"crack_seconds", r.crack_seconds},
         {"budget_seconds", r.budget_seconds},
         {"projected_seconds", r.projected_seconds},
         {"rate_basis", r.rate_basis},
         {"search_exhausted", r.search_exhausted},
         {"checkpoint_rates", rates_to_json(r.checkpoint_rates)},
         {"run_elapsed_seconds", r.run_elapsed_seconds},
         {"run_guesses", r.run_guesses}};
  if (r.attack_kind == AttackKind::brute) {
    j["charset"] = r.charset;
    j["min_len"] = r.min_len;
    j["max_len"] = r.max_len;
  }
  return j.dump();
}

RunRecord record_from_json(const std::string& line) {
  json j = json::parse(line);
  RunRecord r;
  r.password_id = j.at("password_id").get<std::string>();
  r.password = j.at("password").get<std::string>();
  r.algorithm = attack::attack_algorithm_from_name(j.at("algorithm").get<std::string>());
  r.attack_name = j.at("attack_name").get<std::string>();
  std::string kind = j.at("attack_kind").get<std::string>();
  if (kind == "brute") r.attack_kind = AttackKind::brute;
  else if (kind == "dictionary") r.attack_kind = AttackKind::dictionary;
  else throw std::invalid_argument("unknown attack kind: " + kind);
  r.charset = j.value("charset", "");
  r.min_len = j.value("min_len", std::size_t{0});
  r.max_len = j.value("max_len", std::size_t{0});
  r.target_key = j.at("target_key").get<std::string>();
  r.outcome = run_outcome_from_name(j.at("outcome").get<std::string>());
  r.crack_seconds = j.at("crack_seconds").get<double>();
  r.budget_seconds = j.at("budget_seconds").get<double>();
  r.projected_seconds = j.at("projected_seconds").get<double>();
  r.rate_basis = j.at("rate_basis").get<std::string>();
  r.search_exhausted = j.at("search_exhausted").get<bool>();
  r.checkpoint_rates = rates_from_json(j.at("checkpoint_rates"));
  r.run_elapsed_seconds = j.at("run_elapsed_seconds").get<double>();
  r.run_guesses = j.at("run_guesses").get<std::uint64_t>();
  return r;
}

double projection_rate(const RunRecord& record, std::string* basis) {
  return trailing_mean_rate(record.checkpoint_rates, record.run_guesses,
                            record.run_elapsed_seconds, basis);
}

std::vector<RunRecord> load_records(const std::filesystem::path& jsonl_path) {
  std::ifstream in(jsonl_path);
  if (!in) throw std::runtime_error("cannot read records: " + jsonl_path.string());
  std::vector<RunRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(record_from_json(line));
    } catch (const std::exception& e) {
      throw std::runtime_error(jsonl_path.string() + ":" + std::to_string(line_no) +
                               ": " + e.what());
    }
  }
  return records;
}

ExperimentResult run_experiment(const ExperimentPlan& plan) {
  validate_plan(plan);
  std::filesystem::create_directories(plan.output_dir);
  std::filesystem::create_directories(plan.output_dir / "potfiles");
  std::filesystem::create_directories(plan.output_dir / "done");
  LockFile lock(plan.output_dir / ".lock");

  Dataset dataset = load_dataset(plan.dataset_path);
  if (dataset.entries.empty())
    throw std::runtime_error("dataset " + plan.dataset_path.string() + " is empty");

  EmittedFiles emitted = emit_hashfiles(dataset, plan.algorithms, plan.bcrypt_cost,
                                        plan.seed, plan.output_dir / "hashes");

  // (algorithm, key) -> dataset entry, via the answer key we just wrote.
  std::map<std::pair<std::string, std::string>, AnswerKeyRow> answers;
  for (auto& row : load_answer_key(emitted.answer_key))
    answers[{attack::attack_algorithm_name(row.algorithm), row.key}] = row;

  ExperimentResult result;
  result.output_dir = plan.output_dir;
  result.records_path = plan.output_dir / "records.jsonl";

  // What a previous (killed) run already journaled.
  std::set<std::string> recorded;  // slug \t target_key
  if (std::filesystem::exists(result.records_path)) {
    for (auto& r : load_records(result.records_path)) {
      recorded.insert(pair_slug(r.algorithm, r.attack_name) + "\t" + r.target_key);
      result.records.push_back(std::move(r));
    }
  }

  std::ofstream journal(result.records_path, std::ios::app);
  if (!journal)
    throw std::runtime_error("cannot open journal: " + result.records_path.string());
  std::mutex journal_mu;

  auto journal_record = [&](const RunRecord& record) {
    std::lock_guard guard(journal_mu);
    journal << record_to_json(record) << '\n';
    journal.flush();
    result.records.push_back(record);
    recorded.insert(pair_slug(record.algorithm, record.attack_name) + "\t" +
                    record.target_key);
  };

  for (attack::AttackAlgorithm alg : plan.algorithms) {
    attack::TargetSet targets = attack::load_hashfile(emitted.hashfiles.at(alg));

    for (const AttackSpec& spec : plan.attacks) {
      std::string slug = pair_slug(alg, spec.name);
      std::filesystem::path done_marker = plan.output_dir / "done" / (slug + ".done");
      if (std::filesystem::exists(done_marker)) continue;

      double budget = alg == attack::AttackAlgorithm::bcrypt
                          ? spec.bcrypt_budget_seconds
                          : spec.budget_seconds;

      attack::Potfile potfile(plan.output_dir / "potfiles" / (slug + ".pot"));
      std::map<std::string, std::string> solved = potfile.load();

      RunRecord base;
      base.algorithm = alg;
      base.attack_name = spec.name;
      base.attack_kind = spec.kind;
      base.budget_seconds = budget;
      if (spec.kind == AttackKind::brute) {
        base.charset = spec.charset;
        base.min_len = spec.min_len;
        base.max_len = spec.max_len;
      }
      auto fill_identity = [&](RunRecord& r, const std::string& key) {
        r.target_key = key;
        auto it = answers.find({attack::attack_algorithm_name(alg), key});
        if (it != answers.end()) {
          r.password_id = it->second.id;
          r.password = it->second.password;
        }
      };

      // Cracks journaled by an earlier interrupted run are already in
      // `recorded`; anything in the potfile beyond that (crash between the
      // two appends) gets a recovery record now.
      attack::EngineOptions options;
      options.workers = plan.workers;
      options.budget_seconds = budget;
      options.checkpoint_seconds = plan.checkpoint_seconds;
      for (const auto& [key, plain] : solved) {
        options.skip_keys.push_back(key);
        if (!recorded.contains(slug + "\t" + key)) {
          RunRecord r = base;
          fill_identity(r, key);
          r.outcome = RunOutcome::cracked;
          r.crack_seconds = 0;
          r.rate_basis = "recovered from potfile after interrupted run";
          journal_record(r);
        }
      }
      options.on_crack = [&](const std::string& key, const std::string& plaintext) {
        potfile.append(key, plaintext);
      };

      attack::AttackReport report;
      if (spec.kind == AttackKind::brute) {
        report = attack::brute_force(targets, attack::Charset::parse(spec.charset),
                                     {spec.min_len, spec.max_len}, options);
      } else {
        std::ifstream words(spec.wordlist);
        if (!words)
          throw std::runtime_error("wordlist not readable: " + spec.wordlist.string());
        report = attack::dictionary_attack(targets, words,
                                           attack::RuleSet::parse(spec.rules), options);
      }

      base.checkpoint_rates = report.checkpoint_rates;
      base.run_elapsed_seconds = report.elapsed_seconds;
      base.run_guesses = report.guesses;
      base.search_exhausted = report.exhausted;

      // Projection rate for budget-cut brute runs.
      std::string rate_basis;
      double rate = trailing_mean_rate(report.checkpoint_rates, report.guesses,
                                       report.elapsed_seconds, &rate_basis);

      for (const std::string& key : targets.keys) {
        if (recorded.contains(slug + "\t" + key)) continue;
        RunRecord r = base;
        fill_identity(r, key);

        auto cracked_it = report.cracked.find(key);
        if (cracked_it != report.cracked.end()) {
          if (!r.password.empty() && cracked_it->second != r.password)
            throw std::runtime_error("recovered plaintext disagrees with answer key for " +
                                     key);
          r.outcome = RunOutcome::cracked;
          auto elapsed_it = report.crack_elapsed.find(key);
          r.crack_seconds =
              elapsed_it != report.crack_elapsed.end() ? elapsed_it->second : 0.0;
          journal_record(r);
          continue;
        }

        if (spec.kind == AttackKind::brute && !report.exhausted && rate > 0) {
          // Budget cut the enumeration short: project the full sweep.
          attack::Charset charset = attack::Charset::parse(spec.charset);
          attack::BigInt total =
              attack::keyspace_size(charset, {spec.min_len, spec.max_len});
          std::size_t open = 0;
          for (const std::string& k2 : targets.keys)
            if (!solved.contains(k2)) ++open;
          attack::BigInt total_ops = total;
          attack::BigInt done_ops = report.guesses;
          if (alg == attack::AttackAlgorithm::bcrypt) {
            // Guesses count candidate x record trials; scale the space the
            // same way so the division below stays apples to apples.
            total_ops *= std::max<std::size_t>(open, 1);
          }
          attack::BigInt remaining =
              total_ops > done_ops ? total_ops - done_ops : attack::BigInt(0);
          attack::BigInt projected = attack::estimate_seconds(remaining, rate);
          r.outcome = RunOutcome::estimated;
          r.projected_seconds = projected.convert_to<double>();
          r.rate_basis = rate_basis;
        } else {
          r.outcome = RunOutcome::not_cracked;
          if (spec.kind == AttackKind::dictionary && !report.exhausted) {
            // Budget expired before the list did; record that, there is no
            // meaningful projection without knowing the list's tail.
            r.rate_basis = "budget expired before wordlist was exhausted";
          }
        }
        journal_record(r);
      }

      std::ofstream marker(done_marker);
      marker << "done\n";
    }
  }

  return result;
}

}  // namespace pwlab::bench
