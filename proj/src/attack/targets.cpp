#include "pwlab/attack/targets.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <unordered_set>

namespace pwlab::attack {

namespace {

bool all_hex(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isxdigit(c); });
}

std::string strip(std::string s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const char* attack_algorithm_name(AttackAlgorithm alg) {
  switch (alg) {
    case AttackAlgorithm::md5: return "md5";
    case AttackAlgorithm::sha256: return "sha256";
    case AttackAlgorithm::bcrypt: return "bcrypt";
  }
  return "?";
}

AttackAlgorithm attack_algorithm_from_name(std::string_view name) {
  if (name == "md5") return AttackAlgorithm::md5;
  if (name == "sha256") return AttackAlgorithm::sha256;
  if (name == "bcrypt") return AttackAlgorithm::bcrypt;
  throw std::invalid_argument("unknown attack algorithm: " + std::string(name));
}

TargetSet make_digest_targets(crypto::HashAlgorithm alg,
                              const std::vector<crypto::Digest>& digests) {
  TargetSet ts;
  ts.algorithm = alg == crypto::HashAlgorithm::md5 ? AttackAlgorithm::md5
                                                   : AttackAlgorithm::sha256;
  std::unordered_set<std::string> seen;
  for (const auto& d : digests) {
    if (d.algorithm() != alg) throw std::invalid_argument("mixed digest algorithms");
    std::string key = d.hex();
    if (!seen.insert(key).second) continue;
    ts.digests.push_back(d);
    ts.keys.push_back(std::move(key));
  }
  return ts;
}

TargetSet make_bcrypt_targets(const std::vector<std::string>& record_texts) {
  TargetSet ts;
  ts.algorithm = AttackAlgorithm::bcrypt;
  std::unordered_set<std::string> seen;
  for (const auto& text : record_texts) {
    crypto::BcryptRecord rec = crypto::parse_bcrypt(text);
    if (!seen.insert(text).second) continue;
    ts.records.push_back(rec);
    ts.keys.push_back(text);
  }
  return ts;
}

TargetSet load_hashfile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open hashfile: " + path.string());

  std::vector<crypto::Digest> digests;
  std::vector<std::string> records;
  std::optional<crypto::HashAlgorithm> digest_alg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = strip(line);
    if (t.empty() || t[0] == '#') continue;
    std::string where = path.string() + ":" + std::to_string(lineno);

    if (t.size() == 32 && all_hex(t)) {
      if (!records.empty())
        throw std::runtime_error(where + ": digest mixed into bcrypt hashfile");
      if (digest_alg && *digest_alg != crypto::HashAlgorithm::md5)
        throw std::runtime_error(where + ": mixed digest widths");
      digest_alg = crypto::HashAlgorithm::md5;
      digests.push_back(crypto::Digest::from_hex(t));
    } else if (t.size() == 64 && all_hex(t)) {
      if (!records.empty())
        throw std::runtime_error(where + ": digest mixed into bcrypt hashfile");
      if (digest_alg && *digest_alg != crypto::HashAlgorithm::sha256)
        throw std::runtime_error(where + ": mixed digest widths");
      digest_alg = crypto::HashAlgorithm::sha256;
      digests.push_back(crypto::Digest::from_hex(t));
    } else if (t.starts_with("$2")) {
      if (digest_alg)
        throw std::runtime_error(where + ": bcrypt record mixed into digest hashfile");
      try {
        crypto::parse_bcrypt(t);
      } catch (const crypto::BcryptParseError& e) {
        throw std::runtime_error(where + ": " + e.what());
      }
      records.push_back(t);
    } else {
      throw std::runtime_error(where + ": unrecognized target line");
    }
  }

  if (!records.empty()) return make_bcrypt_targets(records);
  if (!digest_alg) throw std::runtime_error(path.string() + ": no targets found");
  return make_digest_targets(*digest_alg, digests);
}

}  // namespace pwlab::attack
