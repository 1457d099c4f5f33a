#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pwlab/attack/engine.h"
#include "pwlab/attack/keyspace.h"
#include "pwlab/attack/potfile.h"
#include "pwlab/attack/rules.h"
#include "pwlab/attack/targets.h"
#include "pwlab/attack/throughput.h"
#include "pwlab/crypto/hash.h"
#include "temp_dir.h"

using namespace pwlab::attack;
using pwlab::crypto::Digest;
using pwlab::crypto::HashAlgorithm;
using pwlab::crypto::md5;
using pwlab::crypto::sha256;
using testutil::TempDir;
using testutil::write_file;

namespace {

TargetSet md5_targets(const std::vector<std::string>& plaintexts) {
  std::vector<Digest> digests;
  for (const auto& p : plaintexts) digests.push_back(md5(p));
  return make_digest_targets(HashAlgorithm::md5, digests);
}

}  // namespace

TEST_CASE("charset presets have the advertised sizes") {
  CHECK(Charset::preset("lower").size() == 26);
  CHECK(Charset::preset("upper").size() == 26);
  CHECK(Charset::preset("digits").size() == 10);
  CHECK(Charset::preset("alnum").size() == 62);
  CHECK(Charset::preset("mixed69").size() == 69);
  CHECK(Charset::preset("full70").size() == 70);
  for (char c : std::string_view("!@#$%^&"))
    CHECK(Charset::preset("mixed69").index_of(c).has_value());
  CHECK_FALSE(Charset::preset("mixed69").index_of('*').has_value());
  CHECK(Charset::preset("full70").index_of('*').has_value());
  CHECK_THROWS_AS(Charset::preset("base64"), std::invalid_argument);
}

TEST_CASE("charset parsing accepts presets and literal sets") {
  CHECK(Charset::parse("digits") == Charset::preset("digits"));
  CHECK(Charset::parse("chars:abc").symbols() == "abc");
  CHECK_THROWS_AS(Charset::parse("chars:aba"), std::invalid_argument);
  CHECK_THROWS_AS(Charset::parse("chars:"), std::invalid_argument);
  CHECK_THROWS_AS(Charset(""), std::invalid_argument);
}

TEST_CASE("keyspace sizes match hand arithmetic") {
  Charset m = Charset::preset("mixed69");
  CHECK(keyspace_size(m, 1) == 69);
  CHECK(keyspace_size(m, 2) == 4761);
  CHECK(keyspace_size(m, 3) == 328509);
  CHECK(keyspace_size(m, 4) == 22667121);
  CHECK(keyspace_size(m, {1, 3}) == 333339);
  CHECK(keyspace_size(m, {1, 4}) == 23000460);
  CHECK(keyspace_size(m, {1, 4}, true) == 23000460);
  CHECK(keyspace_size(m, {1, 4}, false) == 22667121);
  Charset d = Charset::preset("digits");
  CHECK(keyspace_size(d, {1, 2}) == 110);
  CHECK(keyspace_size(d, 9) == BigInt(1000000000));
}

TEST_CASE("length ranges are validated") {
  CHECK_THROWS_AS(validate_range({0, 3}), std::invalid_argument);
  CHECK_THROWS_AS(validate_range({4, 3}), std::invalid_argument);
  CHECK_THROWS_AS(validate_range({1, kMaxCandidateLength + 1}), std::invalid_argument);
  CHECK_NOTHROW(validate_range({1, kMaxCandidateLength}));
}

TEST_CASE("candidates enumerate shortest first, odometer within a length") {
  Charset d = Charset::preset("digits");
  LengthRange r{1, 2};
  CHECK(candidate_at(d, r, 0) == "0");
  CHECK(candidate_at(d, r, 9) == "9");
  CHECK(candidate_at(d, r, 10) == "00");
  CHECK(candidate_at(d, r, 11) == "01");
  CHECK(candidate_at(d, r, 20) == "10");
  CHECK(candidate_at(d, r, 109) == "99");
  CHECK_THROWS_AS(candidate_at(d, r, 110), std::out_of_range);

  Charset ab = Charset::parse("chars:ab");
  std::vector<std::string> expected = {"a",   "b",   "aa",  "ab",  "ba",  "bb", "aaa",
                                       "aab", "aba", "abb", "baa", "bab", "bba", "bbb"};
  for (std::size_t i = 0; i < expected.size(); ++i)
    CHECK(candidate_at(ab, {1, 3}, i) == expected[i]);
}

TEST_CASE("rank inverts candidate_at across the whole range") {
  Charset ab = Charset::parse("chars:ab");
  LengthRange r{1, 3};
  BigInt space = keyspace_size(ab, r);
  for (BigInt i = 0; i < space; ++i)
    CHECK(rank(ab, r, candidate_at(ab, r, i)) == i);
  CHECK_THROWS_AS(rank(ab, r, "abcd"), std::invalid_argument);
  CHECK_THROWS_AS(rank(ab, r, "ax"), std::invalid_argument);
  CHECK_THROWS_AS(rank(ab, r, ""), std::invalid_argument);
}

TEST_CASE("rule tokens parse, describe, and reject junk") {
  RuleSet rs = RuleSet::parse("identity,capitalize,leet,append-digit:1");
  CHECK(rs.rules().size() == 4);
  CHECK(rs.describe() == "identity,capitalize,leet,append-digit:1");
  CHECK(RuleSet::parse("").empty());
  CHECK(RuleSet::parse("append-digits").rules().size() == 10);
  CHECK_THROWS_AS(RuleSet::parse("reverse"), std::invalid_argument);
  CHECK_THROWS_AS(RuleSet::parse("append-digit:x"), std::invalid_argument);
}

TEST_CASE("rules expand a word in order without duplicates") {
  RuleSet rs = RuleSet::parse("identity,capitalize,toggle,append-digit:1");
  auto vs = apply_rules("qwerty", rs);
  CHECK(vs == std::vector<std::string>{"qwerty", "Qwerty", "QWERTY", "qwerty1"});

  auto leet = apply_rules("pass", RuleSet::parse("leet"));
  CHECK(leet == std::vector<std::string>{"p@ss", "pa$s", "pas$", "p@$$"});

  auto empty_rules = apply_rules("word", RuleSet{});
  CHECK(empty_rules == std::vector<std::string>{"word"});

  // "identity,lowercase" on an already-lowercase word collapses to one.
  CHECK(apply_rules("abc", RuleSet::parse("identity,lowercase")).size() == 1);
}

TEST_CASE("brute force finds every target inside the space") {
  TargetSet ts = md5_targets({"7", "42", "99"});
  AttackReport report = brute_force(ts, Charset::preset("digits"), {1, 2});
  REQUIRE(report.cracked.size() == 3);
  CHECK(report.cracked.at(md5("7").hex()) == "7");
  CHECK(report.cracked.at(md5("42").hex()) == "42");
  CHECK(report.cracked.at(md5("99").hex()) == "99");
  CHECK(report.crack_elapsed.size() == 3);
  CHECK(report.exhausted);
}

TEST_CASE("worker counts do not change what gets cracked") {
  TargetSet ts = md5_targets({"ab", "zz", "qx"});
  Charset lower = Charset::preset("lower");
  EngineOptions single;
  single.workers = 1;
  AttackReport one = brute_force(ts, lower, {1, 2}, single);
  for (std::size_t w : {2u, 4u}) {
    EngineOptions o;
    o.workers = w;
    AttackReport many = brute_force(ts, lower, {1, 2}, o);
    CHECK(many.cracked == one.cracked);
  }
}

TEST_CASE("an unmatched target forces a full sweep with exact accounting") {
  std::vector<Digest> digests = {md5("out-of-space")};
  TargetSet ts = make_digest_targets(HashAlgorithm::md5, digests);
  AttackReport report = brute_force(ts, Charset::preset("digits"), {1, 3});
  CHECK(report.cracked.empty());
  CHECK(report.exhausted);
  CHECK(report.guesses == 1110);
}

TEST_CASE("the budget cuts a sweep short") {
  TargetSet ts = md5_targets({"zzzzzzzz"});
  EngineOptions o;
  o.budget_seconds = 0.2;
  o.workers = 2;
  AttackReport report = brute_force(ts, Charset::preset("lower"), {8, 8}, o);
  CHECK_FALSE(report.exhausted);
  CHECK(report.cracked.empty());
  CHECK(report.guesses > 0);
  CHECK(report.elapsed_seconds < 5.0);
}

TEST_CASE("bcrypt targets count one guess per candidate-record pair") {
  auto salt_a = pwlab::crypto::random_bcrypt_salt(1);
  auto salt_b = pwlab::crypto::random_bcrypt_salt(2);
  std::vector<std::string> records = {
      format_bcrypt(pwlab::crypto::bcrypt_hash("7", salt_a, 4)),
      format_bcrypt(pwlab::crypto::bcrypt_hash("9", salt_b, 4)),
  };
  TargetSet ts = make_bcrypt_targets(records);
  AttackReport report = brute_force(ts, Charset::preset("digits"), {1, 1});
  CHECK(report.cracked.size() == 2);
  CHECK(report.cracked.at(records[0]) == "7");
  CHECK(report.cracked.at(records[1]) == "9");
  CHECK(report.exhausted);
  // "7" falls at index 7 closing one slot, "9" at index 9; 10 candidates
  // against up to two open records.
  CHECK(report.guesses >= 10);
  CHECK(report.guesses <= 20);
}

TEST_CASE("skip keys remove already-solved slots") {
  TargetSet ts = md5_targets({"3", "5"});
  EngineOptions o;
  o.skip_keys.push_back(md5("3").hex());
  AttackReport report = brute_force(ts, Charset::preset("digits"), {1, 1}, o);
  CHECK(report.cracked.size() == 1);
  CHECK(report.cracked.count(md5("3").hex()) == 0);
}

TEST_CASE("on_crack fires while the run is still going") {
  TargetSet ts = md5_targets({"1", "8"});
  std::vector<std::string> seen;
  EngineOptions o;
  o.on_crack = [&](const std::string&, const std::string& plain) {
    seen.push_back(plain);
  };
  brute_force(ts, Charset::preset("digits"), {1, 1}, o);
  std::sort(seen.begin(), seen.end());
  CHECK(seen == std::vector<std::string>{"1", "8"});
}

TEST_CASE("dictionary attack applies rules and reports exhaustion") {
  TargetSet ts = md5_targets({"Qwerty1", "dragon"});
  std::istringstream words("qwerty\ndragon\nletmein\n");
  AttackReport report =
      dictionary_attack(ts, words, RuleSet::parse("identity,capitalize,append-digit:1"));
  // "Qwerty1" needs capitalize+append which no single pass produces.
  CHECK(report.cracked.size() == 1);
  CHECK(report.cracked.at(md5("dragon").hex()) == "dragon");
  CHECK(report.exhausted);

  std::istringstream words2("QWERTY1\n");
  AttackReport r2 = dictionary_attack(md5_targets({"qwerty1"}), words2,
                                      RuleSet::parse("lowercase"));
  CHECK(r2.cracked.size() == 1);
}

TEST_CASE("engines reject degenerate inputs") {
  TargetSet empty;
  empty.algorithm = AttackAlgorithm::md5;
  CHECK_THROWS_AS(brute_force(empty, Charset::preset("digits"), {1, 1}),
                  std::invalid_argument);
  TargetSet ts = md5_targets({"1"});
  EngineOptions o;
  o.workers = 0;
  CHECK_THROWS_AS(brute_force(ts, Charset::preset("digits"), {1, 1}, o),
                  std::invalid_argument);
  std::istringstream words("a\n");
  CHECK_THROWS_AS(dictionary_attack(empty, words, RuleSet{}), std::invalid_argument);
}

TEST_CASE("sha256 targets crack the same way") {
  std::vector<Digest> digests = {sha256("ok")};
  TargetSet ts = make_digest_targets(HashAlgorithm::sha256, digests);
  AttackReport report = brute_force(ts, Charset::preset("lower"), {1, 2});
  CHECK(report.cracked.at(sha256("ok").hex()) == "ok");
}

TEST_CASE("potfile round-trips and later entries win") {
  TempDir tmp;
  Potfile pot(tmp.file("test.pot"));
  CHECK(pot.load().empty());
  pot.append("k1", "first");
  pot.append("k2", "second");
  pot.append("k1", "replacement");
  auto m = pot.load();
  CHECK(m.size() == 2);
  CHECK(m.at("k1") == "replacement");
  CHECK(m.at("k2") == "second");
}

TEST_CASE("hashfiles load digests, records, and reject mixtures") {
  TempDir tmp;
  auto md5_file = write_file(tmp.file("m.txt"),
                             md5("1").hex() + "\n\n# comment\n  " + md5("2").hex() + "\n");
  TargetSet m = load_hashfile(md5_file);
  CHECK(m.algorithm == AttackAlgorithm::md5);
  CHECK(m.size() == 2);

  auto sha_file = write_file(tmp.file("s.txt"), sha256("1").hex() + "\n");
  CHECK(load_hashfile(sha_file).algorithm == AttackAlgorithm::sha256);

  auto salt = pwlab::crypto::random_bcrypt_salt(5);
  std::string rec = format_bcrypt(pwlab::crypto::bcrypt_hash("x", salt, 4));
  CHECK(load_hashfile(write_file(tmp.file("b.txt"), rec + "\n" + rec + "\n")).size() ==
        1);  // duplicates collapse

  CHECK_THROWS_AS(load_hashfile(write_file(tmp.file("mix.txt"),
                                           md5("1").hex() + "\n" + rec + "\n")),
                  std::runtime_error);
  CHECK_THROWS_AS(load_hashfile(write_file(tmp.file("widths.txt"),
                                           md5("1").hex() + "\n" + sha256("1").hex() +
                                               "\n")),
                  std::runtime_error);
  CHECK_THROWS_AS(load_hashfile(write_file(tmp.file("junk.txt"), "hello\n")),
                  std::runtime_error);
  CHECK_THROWS_AS(load_hashfile(write_file(tmp.file("empty.txt"), "\n#just this\n")),
                  std::runtime_error);
  CHECK_THROWS_AS(load_hashfile(tmp.file("missing.txt")), std::runtime_error);
}

TEST_CASE("sweep time estimates are exact integer arithmetic") {
  CHECK(estimate_seconds(4761, 4761.0) == 1);
  CHECK(estimate_seconds(4762, 4761.0) == 2);
  CHECK(estimate_seconds(0, 1000.0) == 0);
  CHECK(estimate_seconds(BigInt("1000000000000"), 1e6) == 1000000);
  CHECK_THROWS_AS(estimate_seconds(10, 0.0), std::invalid_argument);
}

TEST_CASE("durations format the way people read them") {
  CHECK(format_duration(BigInt(0)) == "<1s");
  CHECK(format_duration(BigInt(45)) == "45s");
  CHECK(format_duration(BigInt(352)) == "5min52s");
  CHECK(format_duration(BigInt(300)) == "5min");
  CHECK(format_duration(BigInt(16020)) == "4h27min");
  CHECK(format_duration(BigInt(72) * 3600) == "72h");
  CHECK(format_duration(BigInt(86400) * 100) == "100 days");
  CHECK(format_duration(BigInt(86400) * 365 * 48) == "48 years");
  CHECK(format_duration(0.4) == "<1s");
  CHECK(format_duration(45.4) == "45s");
}

TEST_CASE("throughput sampling returns a positive calibrated rate") {
  ThroughputSample s = measure_throughput(AttackAlgorithm::md5, 0, 0.2, 1);
  CHECK(s.guesses_per_second > 0);
  CHECK(s.guesses > 0);
  CHECK(s.seconds > 0.05);
}
