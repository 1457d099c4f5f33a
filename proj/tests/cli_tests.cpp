#include <doctest.h>

#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "pwlab/crypto/bcrypt.h"
#include "pwlab/crypto/hash.h"
#include "pwlab/attack/potfile.h"
#include "pwlab/defense/checker_wire.h"
#include "pwlab/defense/honeychecker.h"
#include "temp_dir.h"

namespace crypto = pwlab::crypto;
using nlohmann::json;
using testutil::read_file;
using testutil::TempDir;
using testutil::write_file;

namespace {

struct CliRun {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string shell_quote(const std::string& s) {
  std::string quoted = "'";
  for (char c : s) {
    if (c == '\'') quoted += "'\\''";
    else quoted += c;
  }
  quoted += "'";
  return quoted;
}

CliRun run_cli(const std::vector<std::string>& args, const std::string& stdin_text = "",
               const std::vector<std::pair<std::string, std::string>>& env = {}) {
  TempDir io;
  write_file(io.file("in"), stdin_text);

  std::string cmd;
  for (const auto& [key, value] : env) cmd += key + "=" + shell_quote(value) + " ";
  cmd += shell_quote(PWLAB_BIN);
  for (const auto& arg : args) cmd += " " + shell_quote(arg);
  cmd += " < " + shell_quote(io.file("in").string());
  cmd += " > " + shell_quote(io.file("out").string());
  cmd += " 2> " + shell_quote(io.file("err").string());

  int status = std::system(cmd.c_str());
  CliRun result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = read_file(io.file("out"));
  result.err = read_file(io.file("err"));
  return result;
}

json last_json_line(const std::string& out) {
  std::size_t end = out.find_last_not_of('\n');
  REQUIRE(end != std::string::npos);
  std::size_t begin = out.find_last_of('\n', end);
  begin = begin == std::string::npos ? 0 : begin + 1;
  return json::parse(out.substr(begin, end - begin + 1));
}

std::vector<std::string> out_lines(const std::string& out) {
  std::vector<std::string> lines;
  std::string line;
  std::istringstream in(out);
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("usage mistakes exit 2, operational trouble exits 1") {
  CHECK(run_cli({}).exit_code == 2);
  CHECK(run_cli({"frobnicate"}).exit_code == 2);
  CHECK(run_cli({"hash"}).exit_code == 2);  // --alg is required
  CHECK(run_cli({"hash", "--alg", "whirlpool"}).exit_code == 2);
  CHECK(run_cli({"hash", "--alg", "bcrypt", "--cost", "3"}, "x\n").exit_code == 2);
  CHECK(run_cli({"hash", "--alg", "bcrypt", "--cost", "32"}, "x\n").exit_code == 2);
  CHECK(run_cli({"hash", "--alg", "md5", "--cost", "6"}, "x\n").exit_code == 2);
  CHECK(run_cli({"hash", "--alg", "sha256", "--salt", "00"}, "x\n").exit_code == 2);
  CHECK(run_cli({"hash", "--alg", "bcrypt", "--salt", "zz"}, "x\n").exit_code == 2);
  CHECK(run_cli({"crack", "--hashfile", "h"}).exit_code == 2);  // --mode is required

  CliRun empty_stdin = run_cli({"hash", "--alg", "md5"}, "");
  CHECK(empty_stdin.exit_code == 1);
  CHECK(empty_stdin.err.find("no password on stdin") != std::string::npos);

  CliRun missing = run_cli({"crack", "--mode", "brute", "--hashfile", "/no/such/file"});
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.find("error:") != std::string::npos);

  CliRun help = run_cli({"--help"});
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("hash") != std::string::npos);
  CHECK(help.out.find("crack") != std::string::npos);
}

TEST_CASE("hash subcommand digests stdin lines in order") {
  CliRun run = run_cli({"hash", "--alg", "md5"}, "123456\r\npassword\n\nabcdef\n");
  CHECK(run.exit_code == 0);
  auto lines = out_lines(run.out);
  REQUIRE(lines.size() == 3);  // \r stripped, blank line skipped
  CHECK(lines[0] == "e10adc3949ba59abbe56e057f20f883e");
  CHECK(lines[1] == "5f4dcc3b5aa765d61d8327deb882cf99");
  CHECK(lines[2] == "e80b5017098950fc58aad83c8c14978e");

  CliRun sha = run_cli({"hash", "--alg", "sha256"}, "abc\n");
  CHECK(sha.exit_code == 0);
  CHECK(out_lines(sha.out).at(0) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("hash subcommand mints bcrypt records") {
  const std::string salt_hex = "000102030405060708090a0b0c0d0e0f";
  CliRun a = run_cli({"hash", "--alg", "bcrypt", "--cost", "4", "--salt", salt_hex},
                     "hunter2\n");
  CHECK(a.exit_code == 0);
  std::string record_text = out_lines(a.out).at(0);
  CHECK(record_text.rfind("$2b$04$", 0) == 0);
  CHECK(crypto::bcrypt_verify("hunter2", crypto::parse_bcrypt(record_text)));

  // Pinned salt: byte-identical reruns. Random salt: fresh records that
  // still verify.
  CliRun b = run_cli({"hash", "--alg", "bcrypt", "--cost", "4", "--salt", salt_hex},
                     "hunter2\n");
  CHECK(b.out == a.out);
  CliRun c = run_cli({"hash", "--alg", "bcrypt", "--cost", "4"}, "hunter2\n");
  CliRun d = run_cli({"hash", "--alg", "bcrypt", "--cost", "4"}, "hunter2\n");
  CHECK(c.out != d.out);
  CHECK(crypto::bcrypt_verify("hunter2", crypto::parse_bcrypt(out_lines(c.out).at(0))));
}

TEST_CASE("crack brute mode cracks, journals to the potfile, and skips on rerun") {
  TempDir tmp;
  write_file(tmp.file("targets.txt"),
             crypto::md5("7").hex() + "\n" + crypto::md5("42").hex() + "\n");
  std::vector<std::string> args = {
      "crack",     "--mode",   "brute",
      "--hashfile", tmp.file("targets.txt").string(),
      "--charset", "digits",  "--min", "1", "--max", "2",
      "--workers", "2",       "--potfile", tmp.file("session.pot").string()};

  CliRun first = run_cli(args);
  CHECK(first.exit_code == 0);
  CHECK(first.out.find("\t7\n") != std::string::npos);
  CHECK(first.out.find("\t42\n") != std::string::npos);
  json summary = last_json_line(first.out);
  CHECK(summary["command"] == "crack");
  CHECK(summary["mode"] == "brute");
  CHECK(summary["targets"] == 2);
  CHECK(summary["previously_cracked"] == 0);
  CHECK(summary["cracked"] == 2);
  CHECK(summary["exhausted"] == true);
  CHECK(summary["potfile"] == tmp.file("session.pot").string());

  std::string pot = read_file(tmp.file("session.pot"));
  CHECK(pot.find(crypto::md5("7").hex() + "\t7\n") != std::string::npos);
  CHECK(pot.find(crypto::md5("42").hex() + "\t42\n") != std::string::npos);

  CliRun second = run_cli(args);
  CHECK(second.exit_code == 0);
  json again = last_json_line(second.out);
  CHECK(again["previously_cracked"] == 2);
  CHECK(again["cracked"] == 0);
  CHECK(second.out.find("\t7\n") == std::string::npos);  // not re-announced
}

TEST_CASE("the potfile path falls back from flag to environment") {
  TempDir tmp;
  write_file(tmp.file("t.txt"), crypto::md5("5").hex() + "\n");
  std::vector<std::string> args = {"crack", "--mode", "brute",
                                   "--hashfile", tmp.file("t.txt").string(),
                                   "--charset", "digits", "--min", "1", "--max", "1"};

  CliRun via_env = run_cli(args, "", {{"PWLAB_POTFILE", tmp.file("env.pot").string()}});
  CHECK(via_env.exit_code == 0);
  CHECK(last_json_line(via_env.out)["potfile"] == tmp.file("env.pot").string());
  CHECK(std::filesystem::exists(tmp.file("env.pot")));

  auto flag_args = args;
  flag_args.insert(flag_args.end(), {"--potfile", tmp.file("flag.pot").string()});
  CliRun via_flag =
      run_cli(flag_args, "", {{"PWLAB_POTFILE", tmp.file("env2.pot").string()}});
  CHECK(last_json_line(via_flag.out)["potfile"] == tmp.file("flag.pot").string());
  CHECK_FALSE(std::filesystem::exists(tmp.file("env2.pot")));
}

TEST_CASE("crack dict mode applies rules from the command line") {
  TempDir tmp;
  write_file(tmp.file("words.txt"), "dragon\nletmein\nsunshine\n");
  write_file(tmp.file("t.txt"), crypto::sha256("Letmein").hex() + "\n");
  CliRun run = run_cli({"crack", "--mode", "dict",
                        "--hashfile", tmp.file("t.txt").string(),
                        "--wordlist", tmp.file("words.txt").string(),
                        "--rules", "identity,capitalize",
                        "--potfile", tmp.file("p.pot").string()});
  CHECK(run.exit_code == 0);
  json summary = last_json_line(run.out);
  CHECK(summary["mode"] == "dict");
  CHECK(summary["cracked"] == 1);
  CHECK(run.out.find("\tLetmein\n") != std::string::npos);
}

TEST_CASE("rainbow build and lookup round trip through the CLI") {
  TempDir tmp;
  CliRun build = run_cli({"rainbow", "build", "--alg", "md5",
                          "--charset", "digits", "--length", "3",
                          "--chains", "400", "--chain-length", "40",
                          "--seed", "5", "--out", tmp.file("t.tbl").string()});
  CHECK(build.exit_code == 0);
  json built = last_json_line(build.out);
  CHECK(built["command"] == "rainbow-build");
  CHECK(built["chains_stored"].get<std::size_t>() > 0);
  CHECK(built["coverage"].get<double>() > 0.0);
  CHECK(built["coverage"].get<double>() <= 1.0);

  std::size_t found = 0;
  for (int i = 0; i < 20; ++i) {
    char plain[8];
    std::snprintf(plain, sizeof(plain), "%03d", i * 47 % 1000);
    std::string digest = crypto::md5(plain).hex();
    CliRun look = run_cli({"rainbow", "lookup", "--table", tmp.file("t.tbl").string(),
                           "--digest", digest});
    CHECK(look.exit_code == 0);
    json answer = last_json_line(look.out);
    if (answer["found"].get<bool>()) {
      ++found;
      CHECK(answer["plaintext"] == plain);
    }
  }
  // The exact hit set is fixed by the build seed; the table covers most of
  // the 1000-candidate space, so a washout here means the table is broken.
  CHECK(found >= 10);

  // A digest of the wrong width cannot belong to this table.
  CliRun wrong = run_cli({"rainbow", "lookup", "--table", tmp.file("t.tbl").string(),
                          "--digest", crypto::sha256("123").hex()});
  CHECK(wrong.exit_code == 1);

  // crack --mode rainbow drives the same table against a hashfile.
  write_file(tmp.file("t.txt"),
             crypto::md5("271").hex() + "\n" + crypto::md5("904").hex() + "\n");
  CliRun crack = run_cli({"crack", "--mode", "rainbow",
                          "--hashfile", tmp.file("t.txt").string(),
                          "--table", tmp.file("t.tbl").string(),
                          "--potfile", tmp.file("r.pot").string()});
  CHECK(crack.exit_code == 0);
  json summary = last_json_line(crack.out);
  CHECK(summary["mode"] == "rainbow");
  CHECK(summary["targets"] == 2);
  for (const auto& [key, plain] :
       pwlab::attack::Potfile(tmp.file("r.pot")).load())
    CHECK(crypto::md5(plain).hex() == key);

  CliRun no_table = run_cli({"crack", "--mode", "rainbow",
                             "--hashfile", tmp.file("t.txt").string()});
  CHECK(no_table.exit_code == 2);
}

TEST_CASE("rainbow tables refuse bcrypt hashfiles") {
  TempDir tmp;
  CliRun build = run_cli({"rainbow", "build", "--alg", "md5",
                          "--charset", "digits", "--length", "2",
                          "--chains", "20", "--chain-length", "10",
                          "--seed", "1", "--out", tmp.file("t.tbl").string()});
  REQUIRE(build.exit_code == 0);
  auto salt = crypto::random_bcrypt_salt(1);
  write_file(tmp.file("b.txt"),
             crypto::format_bcrypt(crypto::bcrypt_hash("42", salt, 4)) + "\n");
  CliRun crack = run_cli({"crack", "--mode", "rainbow",
                          "--hashfile", tmp.file("b.txt").string(),
                          "--table", tmp.file("t.tbl").string(),
                          "--potfile", tmp.file("p.pot").string()});
  CHECK(crack.exit_code == 1);
  CHECK(crack.err.find("bcrypt") != std::string::npos);
}

TEST_CASE("the defense demo walks every route and stays generic on failures") {
  CliRun demo = run_cli({"defend", "demo", "--k", "4", "--cost", "4", "--seed", "9"});
  CHECK(demo.exit_code == 0);
  CHECK(demo.out.find("registered alice with 4 sweetwords") != std::string::npos);
  CHECK(demo.out.find("real password, usual context -> Ok (event Success)") !=
        std::string::npos);
  CHECK(demo.out.find(
            "decoy sweetword (cracked store) -> GenericFailure (event HoneywordAlert)") !=
        std::string::npos);
  CHECK(demo.out.find("correct password while locked -> GenericFailure (event Locked)") !=
        std::string::npos);
  CHECK(demo.out.find("real password, risky context -> MfaRequired (event MfaIssued)") !=
        std::string::npos);
  CHECK(demo.out.find("mfa code entered -> Ok (event Success)") != std::string::npos);
  CHECK(demo.out.find(
            "real password, hostile context -> GenericFailure (event Blocked)") !=
        std::string::npos);
  CHECK(demo.out.find("unknown user -> GenericFailure (event Failure)") !=
        std::string::npos);

  json summary = last_json_line(demo.out);
  CHECK(summary["command"] == "defend-demo");
  CHECK(summary["user"] == "alice");
  CHECK(summary["sweetwords"] == 4);
  CHECK(summary["events"]["HoneywordAlert"] == 1);
  CHECK(summary["events"]["MfaIssued"] == 1);
  CHECK(summary["events"]["Blocked"] == 1);
  CHECK(summary["events"]["Locked"].get<int>() >= 2);

  CHECK(run_cli({"defend", "demo", "--k", "1"}).exit_code == 2);
  CHECK(run_cli({"defend", "demo", "--k", "65"}).exit_code == 2);
  CHECK(run_cli({"defend", "demo", "--cost", "3"}).exit_code == 2);
}

TEST_CASE("serve-checker answers over its socket until told to stop") {
  TempDir tmp;
  std::string socket_path = tmp.file("hc.sock").string();
  std::string cmd = shell_quote(PWLAB_BIN) + " defend serve-checker --socket " +
                    shell_quote(socket_path) + " --seed 3 2> " +
                    shell_quote(tmp.file("err").string()) + " & echo $! > " +
                    shell_quote(tmp.file("pid").string());
  REQUIRE(std::system(cmd.c_str()) == 0);

  // Wait for the listener to come up.
  pwlab::defense::CheckerClient client(socket_path);
  bool up = false;
  for (int i = 0; i < 50 && !up; ++i) {
    try {
      client.set_index("alice", 2);
      up = true;
    } catch (const pwlab::defense::CheckerError&) {
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
  }
  REQUIRE(up);
  CHECK(client.check("alice", 2, 1) == pwlab::defense::CheckResult::real);
  CHECK(client.check("alice", 0, 2) == pwlab::defense::CheckResult::decoy);

  pid_t pid = 0;
  {
    std::ifstream pid_in(tmp.file("pid"));
    REQUIRE(static_cast<bool>(pid_in >> pid));
  }
  REQUIRE(::kill(pid, SIGTERM) == 0);
  bool gone = false;
  for (int i = 0; i < 50 && !gone; ++i) {
    if (::kill(pid, 0) != 0) gone = true;
    else std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  CHECK(gone);
  std::string err = read_file(tmp.file("err"));
  CHECK(err.find("honeychecker listening on") != std::string::npos);
  CHECK(err.find("honeychecker stopped") != std::string::npos);
}

TEST_CASE("bench run and report drive the harness from the command line") {
  TempDir tmp;
  write_file(tmp.file("data.tsv"),
             "12\tLow\tPseudoRandom\ttiny pin\n"
             "Q9!x\tMedium\tPseudoRandom\tout of the digit space\n");
  write_file(tmp.file("exp.plan"),
             "dataset = data.tsv\n"
             "output_dir = out\n"
             "algorithms = md5\n"
             "seed = 4\n"
             "[attack quick-digits]\n"
             "kind = brute\n"
             "charset = digits\n"
             "min_len = 1\n"
             "max_len = 2\n"
             "budget_seconds = 30\n");

  CliRun run = run_cli({"bench", "run", "--plan", tmp.file("exp.plan").string()});
  CHECK(run.exit_code == 0);
  json summary = last_json_line(run.out);
  CHECK(summary["command"] == "bench-run");
  CHECK(summary["count"] == 2);
  CHECK(summary["cracked"] == 1);
  std::string records = summary["records"].get<std::string>();
  CHECK(std::filesystem::exists(records));

  CliRun matrix = run_cli({"report", "--records", records, "--schema", "matrix"});
  CHECK(matrix.exit_code == 0);
  CHECK(matrix.out.rfind("id,password,", 0) == 0);
  CHECK(matrix.out.find("\n# speed md5 quick-digits:") != std::string::npos);

  CliRun md = run_cli({"report", "--records", records,
                       "--schema", "keyspace", "--format", "md"});
  CHECK(md.exit_code == 0);
  CHECK(md.out.rfind("| length |", 0) == 0);

  CHECK(run_cli({"report", "--records", records, "--schema", "pie"}).exit_code == 2);
  CHECK(run_cli({"report", "--records", tmp.file("none.jsonl").string(),
                 "--schema", "matrix"})
            .exit_code == 1);
  CHECK(run_cli({"bench", "run", "--plan", tmp.file("none.plan").string()})
            .exit_code == 1);
}
