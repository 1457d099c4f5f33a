#include "pwlab/attack/rainbow.h"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "pwlab/crypto/hash.h"

namespace pwlab::attack {

namespace {

constexpr char kMagic[] = "pwlab-rainbow-v1";
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t load_le64(std::span<const std::uint8_t> b) {
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return x;
}

void reduce_into(std::span<const std::uint8_t> digest_bytes, std::uint32_t position,
                 const Charset& charset, std::string& out, std::uint32_t table_seed) {
  std::uint64_t state = load_le64(digest_bytes) ^
                        ((static_cast<std::uint64_t>(position) + 1 +
                          static_cast<std::uint64_t>(table_seed) * kGolden) *
                         0xbf58476d1ce4e5b9ull);
  std::uint64_t n = charset.size();
  for (char& c : out) {
    state += kGolden;
    c = charset.at(static_cast<std::size_t>(mix64(state) % n));
  }
}

void hash_candidate(AttackAlgorithm alg, const std::string& text, std::uint8_t out[32]) {
  if (alg == AttackAlgorithm::md5)
    crypto::md5_raw(reinterpret_cast<const std::uint8_t*>(text.data()), text.size(), out);
  else
    crypto::sha256_raw(reinterpret_cast<const std::uint8_t*>(text.data()), text.size(), out);
}

std::size_t digest_width(AttackAlgorithm alg) { return alg == AttackAlgorithm::md5 ? 16 : 32; }

void require_chainable(const RainbowParams& p) {
  if (p.algorithm == AttackAlgorithm::bcrypt)
    throw std::invalid_argument(
        "bcrypt records are salted per entry; chain tables need one fixed hash function");
  if (p.length < 1 || p.length > kMaxCandidateLength)
    throw std::invalid_argument("rainbow candidate length out of range");
  if (p.chain_count < 1 || p.chain_length < 1)
    throw std::invalid_argument("chain_count and chain_length must be >= 1");
}

}  // namespace

std::string reduce_digest(const crypto::Digest& digest, std::uint32_t position,
                          const Charset& charset, std::size_t length,
                          std::uint32_t table_seed) {
  if (length < 1 || length > kMaxCandidateLength)
    throw std::invalid_argument("reduce length out of range");
  std::string out(length, charset.at(0));
  reduce_into(digest.bytes(), position, charset, out, table_seed);
  return out;
}

double RainbowTable::coverage() const {
  BigInt total = keyspace_size(params.charset, params.length);
  BigInt scaled = BigInt(covered_candidates) * 1000000 / total;
  return scaled.convert_to<double>() / 1e6;
}

const std::string* RainbowTable::find_start(std::string_view endpoint) const {
  auto it = std::lower_bound(chains.begin(), chains.end(), endpoint,
                             [](const auto& pair, std::string_view key) {
                               return pair.first < key;
                             });
  if (it == chains.end() || it->first != endpoint) return nullptr;
  return &it->second;
}

RainbowTable build_rainbow_table(const RainbowParams& params) {
  require_chainable(params);
  BigInt space = keyspace_size(params.charset, params.length);
  if (BigInt(params.chain_count) > space)
    throw std::invalid_argument("more chains than keyspace entries");

  RainbowTable table;
  table.params = params;
  table.table_seed = static_cast<std::uint32_t>(params.seed ^ (params.seed >> 32));

  // Distinct start points drawn from the seed.
  std::mt19937_64 rng(params.seed);
  std::unordered_set<std::string> starts;
  LengthRange range{params.length, params.length};
  bool small_space = space <= BigInt(std::numeric_limits<std::uint64_t>::max() >> 1);
  std::uint64_t space64 = small_space ? space.convert_to<std::uint64_t>() : 0;
  while (starts.size() < params.chain_count) {
    BigInt idx;
    if (small_space) {
      idx = rng() % space64;
    } else {
      idx = (BigInt(rng()) << 64 | rng()) % space;
    }
    starts.insert(candidate_at(params.charset, range, idx));
  }

  std::unordered_map<std::string, std::string> end_to_start;
  std::uint8_t raw[32];
  std::size_t width = digest_width(params.algorithm);
  for (const std::string& start : starts) {
    std::string cur = start;
    for (std::uint32_t pos = 0; pos < params.chain_length; ++pos) {
      hash_candidate(params.algorithm, cur, raw);
      reduce_into({raw, width}, pos, params.charset, cur, table.table_seed);
    }
    end_to_start.emplace(cur, start);  // first writer wins on endpoint collision
  }

  // Exact coverage: rewalk only the stored chains, counting distinct
  // positions whose hash the lookup can actually reach.
  std::unordered_set<std::string> covered;
  for (const auto& [end, start] : end_to_start) {
    std::string cur = start;
    for (std::uint32_t pos = 0; pos < params.chain_length; ++pos) {
      covered.insert(cur);
      hash_candidate(params.algorithm, cur, raw);
      reduce_into({raw, width}, pos, params.charset, cur, table.table_seed);
    }
  }
  table.covered_candidates = covered.size();

  table.chains.assign(end_to_start.begin(), end_to_start.end());
  std::sort(table.chains.begin(), table.chains.end());
  return table;
}

std::optional<std::string> rainbow_lookup(const RainbowTable& table,
                                          const crypto::Digest& digest) {
  const RainbowParams& p = table.params;
  std::size_t width = digest_width(p.algorithm);
  if (digest.size() != width)
    throw std::invalid_argument("digest algorithm does not match the table");

  std::string walk(p.length, p.charset.at(0));
  std::uint8_t raw[32];
  for (std::uint32_t assumed = p.chain_length; assumed-- > 0;) {
    // Assume the digest sits at chain position `assumed`; walk to the end.
    reduce_into(digest.bytes(), assumed, p.charset, walk, table.table_seed);
    for (std::uint32_t pos = assumed + 1; pos < p.chain_length; ++pos) {
      hash_candidate(p.algorithm, walk, raw);
      reduce_into({raw, width}, pos, p.charset, walk, table.table_seed);
    }
    const std::string* start = table.find_start(walk);
    if (!start) continue;

    // Regenerate from the start to position `assumed` and verify.
    std::string cur = *start;
    for (std::uint32_t pos = 0; pos < assumed; ++pos) {
      hash_candidate(p.algorithm, cur, raw);
      reduce_into({raw, width}, pos, p.charset, cur, table.table_seed);
    }
    hash_candidate(p.algorithm, cur, raw);
    if (std::equal(raw, raw + width, digest.bytes().begin())) return cur;
  }
  return std::nullopt;
}

void save_rainbow_table(const RainbowTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write rainbow table: " + path.string());
  out << kMagic << "\n";
  out << "algorithm=" << attack_algorithm_name(table.params.algorithm) << "\n";
  out << "charset=" << table.params.charset.symbols() << "\n";
  out << "length=" << table.params.length << "\n";
  out << "chain_count=" << table.params.chain_count << "\n";
  out << "chain_length=" << table.params.chain_length << "\n";
  out << "seed=" << table.params.seed << "\n";
  out << "covered=" << table.covered_candidates << "\n";
  out << "pairs=" << table.chains.size() << "\n";
  for (const auto& [end, start] : table.chains) out << end << start << "\n";
  if (!out) throw std::runtime_error("short write: " + path.string());
}

RainbowTable load_rainbow_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open rainbow table: " + path.string());
  std::string line;
  auto next = [&](std::string_view key) {
    if (!std::getline(in, line)) throw std::runtime_error("truncated rainbow table header");
    if (!line.starts_with(key) || line.size() <= key.size() || line[key.size()] != '=')
      throw std::runtime_error("bad rainbow table header line: " + line);
    return line.substr(key.size() + 1);
  };

  if (!std::getline(in, line) || line != kMagic)
    throw std::runtime_error("not a rainbow table file: " + path.string());

  RainbowTable table;
  table.params.algorithm = attack_algorithm_from_name(next("algorithm"));
  table.params.charset = Charset(next("charset"));
  table.params.length = std::stoull(next("length"));
  table.params.chain_count = std::stoull(next("chain_count"));
  table.params.chain_length = static_cast<std::uint32_t>(std::stoul(next("chain_length")));
  table.params.seed = std::stoull(next("seed"));
  table.covered_candidates = std::stoull(next("covered"));
  std::size_t pairs = std::stoull(next("pairs"));
  require_chainable(table.params);
  table.table_seed =
      static_cast<std::uint32_t>(table.params.seed ^ (table.params.seed >> 32));

  std::size_t len = table.params.length;
  table.chains.reserve(pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    if (!std::getline(in, line) || line.size() != 2 * len)
      throw std::runtime_error("truncated or misshapen chain record");
    table.chains.emplace_back(line.substr(0, len), line.substr(len));
  }
  if (!std::is_sorted(table.chains.begin(), table.chains.end()))
    throw std::runtime_error("chain records out of order");
  return table;
}

}  // namespace pwlab::attack
