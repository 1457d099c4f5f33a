#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

#include "pwlab/attack/rainbow.h"
#include "pwlab/crypto/hash.h"
#include "temp_dir.h"

using namespace pwlab::attack;
using pwlab::crypto::compute_digest;
using pwlab::crypto::Digest;
using pwlab::crypto::HashAlgorithm;
using testutil::read_file;
using testutil::TempDir;

namespace {

RainbowParams small_params() {
  RainbowParams p;
  p.algorithm = AttackAlgorithm::md5;
  p.charset = Charset::preset("digits");
  p.length = 2;
  p.chain_count = 30;
  p.chain_length = 8;
  p.seed = 17;
  return p;
}

}  // namespace

TEST_CASE("reduction is deterministic and position-sensitive") {
  Charset d = Charset::preset("digits");
  Digest h = compute_digest(HashAlgorithm::md5, "probe");
  std::string a = reduce_digest(h, 3, d, 4, 99);
  CHECK(a == reduce_digest(h, 3, d, 4, 99));
  CHECK(a.size() == 4);
  for (char c : a) CHECK(d.index_of(c).has_value());
  std::set<std::string> outputs;
  for (std::uint32_t pos = 0; pos < 8; ++pos)
    outputs.insert(reduce_digest(h, pos, d, 4, 99));
  CHECK(outputs.size() >= 7);  // distinct positions act as distinct functions
  CHECK(reduce_digest(h, 3, d, 4, 100) != a);
  CHECK_THROWS_AS(reduce_digest(h, 0, d, 0, 1), std::invalid_argument);
}

TEST_CASE("chains rebuild exactly from their stored start") {
  RainbowTable t = build_rainbow_table(small_params());
  REQUIRE_FALSE(t.chains.empty());
  CHECK(std::is_sorted(t.chains.begin(), t.chains.end()));
  for (const auto& [end, start] : t.chains) {
    std::string cur = start;
    for (std::uint32_t pos = 0; pos < t.params.chain_length; ++pos) {
      Digest h = compute_digest(HashAlgorithm::md5, cur);
      cur = reduce_digest(h, pos, t.params.charset, t.params.length, t.table_seed);
    }
    CHECK(cur == end);
    CHECK(t.find_start(end) != nullptr);
  }
  CHECK(t.find_start("zz") == nullptr);
}

TEST_CASE("every walked candidate can be looked up") {
  RainbowTable t = build_rainbow_table(small_params());
  std::size_t probes = 0, hits = 0;
  for (const auto& [end, start] : t.chains) {
    std::string cur = start;
    for (std::uint32_t pos = 0; pos < t.params.chain_length; ++pos) {
      Digest h = compute_digest(HashAlgorithm::md5, cur);
      ++probes;
      auto found = rainbow_lookup(t, h);
      REQUIRE(found.has_value());
      CHECK(compute_digest(HashAlgorithm::md5, *found) == h);
      hits += found.has_value();
      cur = reduce_digest(h, pos, t.params.charset, t.params.length, t.table_seed);
    }
  }
  CHECK(probes == hits);
  CHECK(t.covered_candidates > 0);
  CHECK(t.coverage() > 0.0);
  CHECK(t.coverage() <= 1.0);
}

TEST_CASE("lookups miss candidates outside the table's space") {
  RainbowTable t = build_rainbow_table(small_params());
  // A salted input maps outside any two-digit preimage.
  Digest salted = compute_digest(HashAlgorithm::md5, "pepper:42");
  CHECK_FALSE(rainbow_lookup(t, salted).has_value());
  Digest wrong_alg = compute_digest(HashAlgorithm::sha256, "42");
  CHECK_THROWS_AS(rainbow_lookup(t, wrong_alg), std::invalid_argument);
}

TEST_CASE("table files round-trip byte for byte") {
  TempDir tmp;
  RainbowTable t = build_rainbow_table(small_params());
  save_rainbow_table(t, tmp.file("t1.rt"));
  RainbowTable back = load_rainbow_table(tmp.file("t1.rt"));
  CHECK(back.chains == t.chains);
  CHECK(back.covered_candidates == t.covered_candidates);
  CHECK(back.table_seed == t.table_seed);
  CHECK(back.params.charset == t.params.charset);
  CHECK(back.params.length == t.params.length);
  CHECK(back.params.chain_length == t.params.chain_length);
  save_rainbow_table(back, tmp.file("t2.rt"));
  CHECK(read_file(tmp.file("t1.rt")) == read_file(tmp.file("t2.rt")));
}

TEST_CASE("corrupted table files are refused") {
  TempDir tmp;
  RainbowTable t = build_rainbow_table(small_params());
  save_rainbow_table(t, tmp.file("t.rt"));
  std::string text = read_file(tmp.file("t.rt"));
  testutil::write_file(tmp.file("trunc.rt"), text.substr(0, text.size() / 2));
  CHECK_THROWS_AS(load_rainbow_table(tmp.file("trunc.rt")), std::runtime_error);
  testutil::write_file(tmp.file("junk.rt"), "not a table\n");
  CHECK_THROWS_AS(load_rainbow_table(tmp.file("junk.rt")), std::runtime_error);
  CHECK_THROWS_AS(load_rainbow_table(tmp.file("missing.rt")), std::runtime_error);
}

TEST_CASE("rainbow construction refuses bcrypt and nonsense shapes") {
  RainbowParams p = small_params();
  p.algorithm = AttackAlgorithm::bcrypt;
  CHECK_THROWS_AS(build_rainbow_table(p), std::invalid_argument);

  p = small_params();
  p.chain_count = 0;
  CHECK_THROWS_AS(build_rainbow_table(p), std::invalid_argument);

  p = small_params();
  p.chain_count = 101;  // more chains than two-digit candidates
  CHECK_THROWS_AS(build_rainbow_table(p), std::invalid_argument);
}
