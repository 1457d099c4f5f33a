#include <algorithm>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pwlab/attack/engine.h"
#include "pwlab/attack/potfile.h"
#include "pwlab/attack/rainbow.h"
#include "pwlab/bench/plan.h"
#include "pwlab/bench/report.h"
#include "pwlab/bench/runner.h"
#include "pwlab/crypto/bcrypt.h"
#include "pwlab/crypto/hash.h"
#include "pwlab/defense/auth.h"
#include "pwlab/defense/checker_wire.h"
#include "pwlab/defense/honeywords.h"
#include "pwlab/defense/store.h"

namespace {

using nlohmann::json;

// Flag values that parse but make no sense. CLI11 handles unknown flags;
// these map to the same exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename F>
auto usage_checked(F&& f, const char* flag) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string(flag) + ": " + e.what());
  }
}

std::vector<std::string> read_stdin_passwords() {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::string resolve_potfile(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("PWLAB_POTFILE"); env && *env) return env;
  return "pwlab.pot";
}

volatile std::sig_atomic_t g_stop_requested = 0;
void handle_stop_signal(int) { g_stop_requested = 1; }

int run_hash(const std::string& alg, int cost, const std::string& salt_hex,
             bool cost_given) {
  std::vector<std::uint8_t> salt_bytes;
  if (alg == "bcrypt") {
    if (cost < pwlab::crypto::kBcryptMinCost || cost > pwlab::crypto::kBcryptMaxCost)
      throw UsageError("--cost must be in [" +
                       std::to_string(pwlab::crypto::kBcryptMinCost) + ", " +
                       std::to_string(pwlab::crypto::kBcryptMaxCost) + "]");
    if (!salt_hex.empty()) {
      salt_bytes = usage_checked(
          [&] { return pwlab::crypto::from_hex(salt_hex); }, "--salt");
      if (salt_bytes.size() != 16)
        throw UsageError("--salt must be 32 hex chars (16 bytes)");
    }
  } else if (cost_given || !salt_hex.empty()) {
    throw UsageError("--cost/--salt only apply to --alg bcrypt");
  }

  std::vector<std::string> passwords = read_stdin_passwords();
  if (passwords.empty()) {
    std::cerr << "error: no password on stdin\n";
    return 1;
  }
  for (const std::string& password : passwords) {
    if (alg == "md5") {
      std::cout << pwlab::crypto::md5(password).hex() << '\n';
    } else if (alg == "sha256") {
      std::cout << pwlab::crypto::sha256(password).hex() << '\n';
    } else {
      auto salt = salt_bytes.empty()
                      ? pwlab::crypto::random_bcrypt_salt()
                      : [&] {
                          std::array<std::uint8_t, 16> s{};
                          std::copy(salt_bytes.begin(), salt_bytes.end(), s.begin());
                          return s;
                        }();
      std::cout << pwlab::crypto::format_bcrypt(
                       pwlab::crypto::bcrypt_hash(password, salt, cost))
                << '\n';
    }
  }
  return 0;
}

int run_crack(const std::string& mode, const std::string& hashfile,
              const std::string& charset_spec, std::size_t min_len, std::size_t max_len,
              const std::string& wordlist, const std::string& rules,
              const std::string& table_path, std::size_t workers, double budget,
              double checkpoint, const std::string& potfile_flag) {
  pwlab::attack::TargetSet targets = pwlab::attack::load_hashfile(hashfile);
  pwlab::attack::Potfile potfile{resolve_potfile(potfile_flag)};

  auto solved = potfile.load();
  pwlab::attack::EngineOptions options;
  options.workers = workers;
  options.budget_seconds = budget;
  options.checkpoint_seconds = checkpoint;
  std::size_t skipped = 0;
  for (const std::string& key : targets.keys)
    if (solved.contains(key)) {
      options.skip_keys.push_back(key);
      ++skipped;
    }
  options.on_crack = [&](const std::string& key, const std::string& plaintext) {
    potfile.append(key, plaintext);
    std::cout << key << '\t' << plaintext << std::endl;
  };

  json summary{{"command", "crack"},
               {"mode", mode},
               {"targets", targets.size()},
               {"previously_cracked", skipped},
               {"potfile", potfile.path().string()}};

  if (mode == "rainbow") {
    if (table_path.empty()) throw UsageError("--mode rainbow needs --table");
    pwlab::attack::RainbowTable table = pwlab::attack::load_rainbow_table(table_path);
    std::size_t cracked = 0;
    for (std::size_t i = 0; i < targets.keys.size(); ++i) {
      if (solved.contains(targets.keys[i])) continue;
      if (targets.algorithm == pwlab::attack::AttackAlgorithm::bcrypt)
        throw std::runtime_error("rainbow tables cannot target bcrypt records");
      auto hit = pwlab::attack::rainbow_lookup(table, targets.digests[i]);
      if (hit) {
        options.on_crack(targets.keys[i], *hit);
        ++cracked;
      }
    }
    summary["cracked"] = cracked;
    std::cout << summary.dump() << '\n';
    return 0;
  }

  pwlab::attack::AttackReport report;
  if (mode == "brute") {
    auto charset = usage_checked(
        [&] { return pwlab::attack::Charset::parse(charset_spec); }, "--charset");
    usage_checked([&] { pwlab::attack::validate_range({min_len, max_len}); return 0; },
                  "--min/--max");
    report = pwlab::attack::brute_force(targets, charset, {min_len, max_len}, options);
  } else {
    if (wordlist.empty()) throw UsageError("--mode dict needs --wordlist");
    auto ruleset = usage_checked(
        [&] { return pwlab::attack::RuleSet::parse(rules); }, "--rules");
    std::ifstream words(wordlist);
    if (!words) throw std::runtime_error("cannot read wordlist: " + wordlist);
    report = pwlab::attack::dictionary_attack(targets, words, ruleset, options);
  }

  summary["cracked"] = report.cracked.size();
  summary["guesses"] = report.guesses;
  summary["elapsed_seconds"] = report.elapsed_seconds;
  summary["exhausted"] = report.exhausted;
  json rates = json::array();
  for (const auto& r : report.checkpoint_rates)
    rates.push_back({{"offset_seconds", r.offset_seconds},
                     {"guesses_per_second", r.guesses_per_second}});
  summary["checkpoint_rates"] = rates;
  std::cout << summary.dump() << '\n';
  return 0;
}

int run_rainbow_build(const std::string& alg, const std::string& charset_spec,
                      std::size_t length, std::uint64_t chains,
                      std::uint32_t chain_length, std::uint64_t seed,
                      const std::string& out_path) {
  pwlab::attack::RainbowParams params;
  params.algorithm = pwlab::attack::attack_algorithm_from_name(alg);
  params.charset = usage_checked(
      [&] { return pwlab::attack::Charset::parse(charset_spec); }, "--charset");
  params.length = length;
  params.chain_count = chains;
  params.chain_length = chain_length;
  params.seed = seed;

  pwlab::attack::RainbowTable table = usage_checked(
      [&] { return pwlab::attack::build_rainbow_table(params); }, "build parameters");
  pwlab::attack::save_rainbow_table(table, out_path);

  json summary{{"command", "rainbow-build"},
               {"path", out_path},
               {"chains_stored", table.chains.size()},
               {"coverage", table.coverage()}};
  std::cout << summary.dump() << '\n';
  return 0;
}

int run_rainbow_lookup(const std::string& table_path, const std::string& digest_hex) {
  pwlab::attack::RainbowTable table = pwlab::attack::load_rainbow_table(table_path);
  auto digest = usage_checked(
      [&] { return pwlab::crypto::Digest::from_hex(digest_hex); }, "--digest");
  auto hit = pwlab::attack::rainbow_lookup(table, digest);
  json summary{{"command", "rainbow-lookup"}, {"found", hit.has_value()}};
  if (hit) summary["plaintext"] = *hit;
  std::cout << summary.dump() << '\n';
  return 0;
}

int run_defend_demo(std::size_t k, int cost, std::uint64_t seed,
                    const std::string& socket_path) {
  using namespace pwlab::defense;

  LocalHoneychecker local(seed * 3 + 1);
  std::optional<CheckerClient> remote;
  Honeychecker* checker = &local;
  if (!socket_path.empty()) {
    remote.emplace(socket_path);
    checker = &*remote;
  }

  CredentialStore store;
  RegistrationOptions reg;
  reg.sweetword_count = k;
  reg.cost = cost;

  AuthConfig config;
  config.dummy_cost = cost;
  Authenticator auth(store, *checker, config, seed);

  const std::string user = "alice";
  const std::string password = "correct-horse-battery";
  register_user(store, *checker, user, password, reg, seed, 1000);
  std::cout << "registered " << user << " with " << k << " sweetwords at cost "
            << cost << '\n';

  RiskBaseline baseline;
  baseline.geo = "DE";
  baseline.known_devices = {"laptop-1"};
  baseline.known_networks = {"home-dsl"};
  RiskContext usual{1700000000, "DE", "laptop-1", "home-dsl"};

  auto show = [&](const std::string& label, const AuthResult& result) {
    std::cout << label << " -> " << auth_response_name(result.response);
    if (auto last = auth.events().last())
      std::cout << " (event " << auth_event_kind_name(last->kind) << ")";
    std::cout << '\n';
  };

  std::int64_t now = 2000;
  show("real password, usual context",
       auth.authenticate(user, password, usual, baseline, now));

  // The decoy list is reproducible from the registration inputs; an attacker
  // who cracked the store would simply read a sweetword out of it.
  auto decoys = generate_honeywords(password, k - 1, default_strategies_for(password),
                                    seed);
  show("decoy sweetword (cracked store)",
       auth.authenticate(user, decoys.front(), usual, baseline, ++now));

  for (int i = 0; i < 5; ++i)
    show("wrong password #" + std::to_string(i + 1),
         auth.authenticate(user, "guess-" + std::to_string(i), usual, baseline, ++now));
  show("correct password while locked",
       auth.authenticate(user, password, usual, baseline, ++now));

  now += auth.lockouts().config().lock_seconds + 1;
  // Unfamiliar device and network, but the usual place and hour: enough for
  // a second factor, not enough to refuse outright.
  RiskContext risky{1700000000, "DE", "unknown-device", "tor-exit"};
  AuthResult mfa_step = auth.authenticate(user, password, risky, baseline, now);
  show("real password, risky context", mfa_step);
  if (mfa_step.response == AuthResponse::mfa_required) {
    auto challenge = auth.mfa().find(*mfa_step.mfa_challenge_id);
    show("mfa code entered",
         auth.verify_mfa(user, *mfa_step.mfa_challenge_id, challenge->code, ++now));
  }

  RiskContext hostile{1700020000, "VN", "unknown-device", "tor-exit"};
  show("real password, hostile context",
       auth.authenticate(user, password, hostile, baseline, ++now));

  show("unknown user", auth.authenticate("mallory", "whatever", usual, baseline, ++now));

  json events;
  for (const auto& e : auth.events().entries()) {
    std::string kind = auth_event_kind_name(e.kind);
    events[kind] = events.value(kind, 0) + 1;
  }
  json summary{{"command", "defend-demo"},
               {"user", user},
               {"sweetwords", k},
               {"events", events}};
  std::cout << summary.dump() << '\n';
  return 0;
}

int run_serve_checker(const std::string& socket_path, std::uint64_t seed) {
  pwlab::defense::LocalHoneychecker checker(seed);
  pwlab::defense::CheckerServer server(socket_path, checker);
  server.start();

  struct sigaction action{};
  action.sa_handler = handle_stop_signal;
  sigaction(SIGINT, &action, nullptr);
  sigaction(SIGTERM, &action, nullptr);

  std::cerr << "honeychecker listening on " << socket_path << '\n';
  while (!g_stop_requested)
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  std::cerr << "honeychecker stopped\n";
  return 0;
}

int run_bench(const std::string& plan_path) {
  pwlab::bench::ExperimentPlan plan = pwlab::bench::load_plan(plan_path);
  std::cerr << "running " << plan.algorithms.size() << " algorithm(s) x "
            << plan.attacks.size() << " attack(s) into " << plan.output_dir.string()
            << '\n';
  pwlab::bench::ExperimentResult result = pwlab::bench::run_experiment(plan);

  std::size_t cracked = 0;
  for (const auto& r : result.records)
    if (r.outcome == pwlab::bench::RunOutcome::cracked) ++cracked;
  json summary{{"command", "bench-run"},
               {"records", result.records_path.string()},
               {"count", result.records.size()},
               {"cracked", cracked}};
  std::cout << summary.dump() << '\n';
  return 0;
}

int run_report(const std::string& records_path, const std::string& schema,
               const std::string& format) {
  auto records = pwlab::bench::load_records(records_path);
  std::string text = pwlab::bench::render_report(
      records, pwlab::bench::report_schema_from_name(schema),
      pwlab::bench::report_format_from_name(format));
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"password hashing, cracking and defense workbench"};
  app.require_subcommand(1);

  auto* hash_cmd = app.add_subcommand("hash", "hash passwords read from stdin");
  std::string hash_alg;
  int hash_cost = 10;
  std::string hash_salt;
  hash_cmd->add_option("--alg", hash_alg, "md5, sha256 or bcrypt")
      ->required()
      ->check(CLI::IsMember({"md5", "sha256", "bcrypt"}));
  auto* cost_opt = hash_cmd->add_option("--cost", hash_cost, "bcrypt cost factor");
  hash_cmd->add_option("--salt", hash_salt, "bcrypt salt, 32 hex chars");

  auto* crack_cmd = app.add_subcommand("crack", "attack a hashfile");
  std::string crack_mode, crack_hashfile, crack_charset = "mixed69";
  std::string crack_wordlist, crack_rules, crack_table, crack_potfile;
  std::size_t crack_min = 1, crack_max = 4, crack_workers = 1;
  double crack_budget = 0, crack_checkpoint = 60;
  crack_cmd->add_option("--mode", crack_mode, "brute, dict or rainbow")
      ->required()
      ->check(CLI::IsMember({"brute", "dict", "rainbow"}));
  crack_cmd->add_option("--hashfile", crack_hashfile, "targets, one per line")
      ->required();
  crack_cmd->add_option("--charset", crack_charset,
                        "preset name or chars:<literal> (brute)");
  crack_cmd->add_option("--min", crack_min, "shortest candidate length (brute)");
  crack_cmd->add_option("--max", crack_max, "longest candidate length (brute)");
  crack_cmd->add_option("--wordlist", crack_wordlist, "word file (dict)");
  crack_cmd->add_option("--rules", crack_rules, "comma-separated rule tokens (dict)");
  crack_cmd->add_option("--table", crack_table, "rainbow table file (rainbow)");
  crack_cmd->add_option("--workers", crack_workers, "worker threads");
  crack_cmd->add_option("--budget", crack_budget, "wall-clock budget seconds, 0 = none");
  crack_cmd->add_option("--checkpoint", crack_checkpoint, "speed sample cadence seconds");
  crack_cmd->add_option("--potfile", crack_potfile,
                        "crack journal (default $PWLAB_POTFILE or pwlab.pot)");

  auto* rainbow_cmd = app.add_subcommand("rainbow", "build or query rainbow tables");
  rainbow_cmd->require_subcommand(1);
  auto* rb_build = rainbow_cmd->add_subcommand("build", "precompute a table");
  std::string rb_alg = "md5", rb_charset = "digits", rb_out;
  std::size_t rb_length = 4;
  std::uint64_t rb_chains = 1000, rb_seed = 1;
  std::uint32_t rb_chain_length = 100;
  rb_build->add_option("--alg", rb_alg, "md5 or sha256")
      ->check(CLI::IsMember({"md5", "sha256"}));
  rb_build->add_option("--charset", rb_charset, "preset name or chars:<literal>");
  rb_build->add_option("--length", rb_length, "candidate length");
  rb_build->add_option("--chains", rb_chains, "chain count");
  rb_build->add_option("--chain-length", rb_chain_length, "hops per chain");
  rb_build->add_option("--seed", rb_seed, "start-point seed");
  rb_build->add_option("--out", rb_out, "output file")->required();
  auto* rb_lookup = rainbow_cmd->add_subcommand("lookup", "invert one digest");
  std::string rb_table, rb_digest;
  rb_lookup->add_option("--table", rb_table, "table file")->required();
  rb_lookup->add_option("--digest", rb_digest, "digest hex")->required();

  auto* defend_cmd = app.add_subcommand("defend", "authentication defense simulation");
  defend_cmd->require_subcommand(1);
  auto* defend_demo = defend_cmd->add_subcommand("demo", "scripted end-to-end walk");
  std::size_t demo_k = 8;
  int demo_cost = 6;
  std::uint64_t demo_seed = 42;
  std::string demo_socket;
  defend_demo->add_option("--k", demo_k, "sweetwords per user (2..64)");
  defend_demo->add_option("--cost", demo_cost, "bcrypt cost");
  defend_demo->add_option("--seed", demo_seed, "determinism seed");
  defend_demo->add_option("--socket", demo_socket,
                          "use a remote honeychecker at this unix socket");
  auto* defend_serve = defend_cmd->add_subcommand(
      "serve-checker", "run the honeychecker process until SIGINT/SIGTERM");
  std::string serve_socket;
  std::uint64_t serve_seed = 0;
  defend_serve->add_option("--socket", serve_socket, "unix socket path")->required();
  auto* serve_seed_opt =
      defend_serve->add_option("--seed", serve_seed, "checker key seed");

  auto* bench_cmd = app.add_subcommand("bench", "experiment harness");
  bench_cmd->require_subcommand(1);
  auto* bench_run = bench_cmd->add_subcommand("run", "execute an experiment plan");
  std::string bench_plan;
  bench_run->add_option("--plan", bench_plan, "plan file")->required();

  auto* report_cmd = app.add_subcommand("report", "render experiment records");
  std::string report_records, report_schema, report_format = "csv";
  report_cmd->add_option("--records", report_records, "records.jsonl path")->required();
  report_cmd->add_option("--schema", report_schema, "matrix or keyspace")
      ->required()
      ->check(CLI::IsMember({"matrix", "keyspace"}));
  report_cmd->add_option("--format", report_format, "csv or md")
      ->check(CLI::IsMember({"csv", "md"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*hash_cmd)
      return run_hash(hash_alg, hash_cost, hash_salt, cost_opt->count() > 0);
    if (*crack_cmd)
      return run_crack(crack_mode, crack_hashfile, crack_charset, crack_min, crack_max,
                       crack_wordlist, crack_rules, crack_table, crack_workers,
                       crack_budget, crack_checkpoint, crack_potfile);
    if (*rb_build)
      return run_rainbow_build(rb_alg, rb_charset, rb_length, rb_chains,
                               rb_chain_length, rb_seed, rb_out);
    if (*rb_lookup) return run_rainbow_lookup(rb_table, rb_digest);
    if (*defend_demo) {
      if (demo_k < 2 || demo_k > pwlab::defense::kMaxSweetwords)
        throw UsageError("--k must be in [2, 64]");
      if (demo_cost < pwlab::crypto::kBcryptMinCost ||
          demo_cost > pwlab::crypto::kBcryptMaxCost)
        throw UsageError("--cost out of range");
      return run_defend_demo(demo_k, demo_cost, demo_seed, demo_socket);
    }
    if (*defend_serve) {
      std::uint64_t seed = serve_seed_opt->count() > 0
                               ? serve_seed
                               : (static_cast<std::uint64_t>(std::random_device{}()) << 32 |
                                  std::random_device{}());
      return run_serve_checker(serve_socket, seed);
    }
    if (*bench_run) return run_bench(bench_plan);
    if (*report_cmd) return run_report(report_records, report_schema, report_format);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::cerr << "error: no subcommand selected\n";
  return 2;
}
