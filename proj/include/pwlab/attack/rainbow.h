#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pwlab/attack/keyspace.h"
#include "pwlab/attack/targets.h"
#include "pwlab/crypto/digest.h"

namespace pwlab::attack {

// Maps a digest to a fixed-length candidate. Distinct positions (and table
// seeds) act as distinct reduction functions so chains do not merge after a
// collision at different depths.
std::string reduce_digest(const crypto::Digest& digest, std::uint32_t position,
                          const Charset& charset, std::size_t length,
                          std::uint32_t table_seed);

struct RainbowParams {
  AttackAlgorithm algorithm = AttackAlgorithm::md5;  // bcrypt is rejected
  Charset charset{Charset::preset("digits")};
  std::size_t length = 4;
  std::uint64_t chain_count = 1000;
  std::uint32_t chain_length = 100;
  std::uint64_t seed = 0;
};

// Precomputed chains stored as (endpoint -> start), sorted by endpoint.
// covered_candidates counts the distinct plaintexts that are guaranteed
// recoverable, i.e. every chain position whose hash was walked.
class RainbowTable {
 public:
  RainbowParams params;
  std::uint32_t table_seed = 0;
  std::vector<std::pair<std::string, std::string>> chains;  // (end, start)
  std::uint64_t covered_candidates = 0;

  double coverage() const;
  const std::string* find_start(std::string_view endpoint) const;
};

RainbowTable build_rainbow_table(const RainbowParams& params);

// Walks the digest from every assumed chain position; endpoint hits are
// re-verified from the chain start, so false alarms are filtered out.
std::optional<std::string> rainbow_lookup(const RainbowTable& table,
                                          const crypto::Digest& digest);

void save_rainbow_table(const RainbowTable& table, const std::filesystem::path& path);
RainbowTable load_rainbow_table(const std::filesystem::path& path);

}  // namespace pwlab::attack
