#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pwlab/crypto/bcrypt.h"
#include "pwlab/crypto/digest.h"

namespace pwlab::attack {

enum class AttackAlgorithm { md5, sha256, bcrypt };

const char* attack_algorithm_name(AttackAlgorithm alg);
AttackAlgorithm attack_algorithm_from_name(std::string_view name);

// Homogeneous set of crack targets. Digest targets are keyed by lowercase
// hex, bcrypt targets by their record text; keys are unique (duplicates in
// the input collapse into one slot).
struct TargetSet {
  AttackAlgorithm algorithm = AttackAlgorithm::md5;
  std::vector<crypto::Digest> digests;       // md5 / sha256 targets
  std::vector<crypto::BcryptRecord> records; // bcrypt targets
  std::vector<std::string> keys;             // one per slot, aligned

  std::size_t size() const { return keys.size(); }
};

TargetSet make_digest_targets(crypto::HashAlgorithm alg,
                              const std::vector<crypto::Digest>& digests);
TargetSet make_bcrypt_targets(const std::vector<std::string>& record_texts);

// One target per non-blank, non-comment line: 32 hex chars, 64 hex chars,
// or a bcrypt record. Mixing kinds in one file is an error.
TargetSet load_hashfile(const std::filesystem::path& path);

}  // namespace pwlab::attack
