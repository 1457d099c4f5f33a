#include "pwlab/attack/throughput.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "pwlab/crypto/bcrypt.h"
#include "pwlab/crypto/hash.h"

namespace pwlab::attack {

namespace {

using Clock = std::chrono::steady_clock;

void digest_burn(AttackAlgorithm alg, std::uint64_t worker, Clock::time_point deadline,
                 std::atomic<std::uint64_t>& total) {
  // Churn through a counter rendered into a fixed 16-byte buffer; the
  // content is irrelevant, the hash work is what is being measured.
  std::uint8_t buf[16];
  std::uint8_t out[32];
  std::uint64_t counter = worker << 56;
  std::uint64_t local = 0;
  for (;;) {
    for (int k = 0; k < 2048; ++k) {
      for (int i = 0; i < 16; ++i) buf[i] = static_cast<std::uint8_t>(counter >> ((i & 7) * 8));
      ++counter;
      if (alg == AttackAlgorithm::md5)
        crypto::md5_raw(buf, 16, out);
      else
        crypto::sha256_raw(buf, 16, out);
    }
    local += 2048;
    if (Clock::now() >= deadline) break;
  }
  total += local;
}

void bcrypt_burn(int cost, std::uint64_t worker, Clock::time_point deadline,
                 std::atomic<std::uint64_t>& total) {
  auto salt = crypto::random_bcrypt_salt(worker * 7919 + 1);
  std::uint64_t counter = 0;
  std::uint64_t local = 0;
  for (;;) {
    crypto::bcrypt_hash("benchmark-" + std::to_string(counter++), salt, cost);
    ++local;
    if (Clock::now() >= deadline) break;
  }
  total += local;
}

}  // namespace

ThroughputSample measure_throughput(AttackAlgorithm algorithm, int bcrypt_cost,
                                    double duration_seconds, std::size_t workers) {
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (duration_seconds <= 0) throw std::invalid_argument("duration must be positive");
  if (algorithm == AttackAlgorithm::bcrypt &&
      (bcrypt_cost < crypto::kBcryptMinCost || bcrypt_cost > crypto::kBcryptMaxCost))
    throw std::invalid_argument("bcrypt cost out of range");

  std::atomic<std::uint64_t> total{0};
  auto start = Clock::now();
  auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                              std::chrono::duration<double>(duration_seconds));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    if (algorithm == AttackAlgorithm::bcrypt)
      pool.emplace_back(bcrypt_burn, bcrypt_cost, w, deadline, std::ref(total));
    else
      pool.emplace_back(digest_burn, algorithm, w, deadline, std::ref(total));
  }
  for (auto& t : pool) t.join();
  double elapsed = std::chrono::duration<double>(Clock::now() - start).count();

  ThroughputSample s;
  s.guesses = total.load();
  s.seconds = elapsed;
  s.guesses_per_second = elapsed > 0 ? static_cast<double>(s.guesses) / elapsed : 0;
  return s;
}

BigInt estimate_seconds(const BigInt& keyspace, double guesses_per_second) {
  if (keyspace < 0) throw std::invalid_argument("keyspace must be non-negative");
  if (!(guesses_per_second > 0)) throw std::invalid_argument("rate must be positive");
  // rate at microguess resolution: ceil(keyspace * 1e6 / rate_micro)
  BigInt rate_micro(std::floor(guesses_per_second * 1e6 + 0.5));
  if (rate_micro == 0) rate_micro = 1;
  BigInt numer = keyspace * 1000000;
  return (numer + rate_micro - 1) / rate_micro;
}

std::string format_duration(const BigInt& seconds) {
  if (seconds < 1) return "<1s";
  if (seconds < 60) return seconds.str() + "s";
  if (seconds < 3600) {
    BigInt m = seconds / 60, s = seconds % 60;
    return s == 0 ? m.str() + "min" : m.str() + "min" + s.str() + "s";
  }
  if (seconds < BigInt(240) * 3600) {
    BigInt h = seconds / 3600, m = (seconds % 3600) / 60;
    if (h < 10 && m != 0) return h.str() + "h" + m.str() + "min";
    return h.str() + "h";
  }
  if (seconds < BigInt(86400) * 730) {
    BigInt d = seconds / 86400;
    return d.str() + " days";
  }
  BigInt y = seconds / (BigInt(86400) * 365);
  return y.str() + (y == 1 ? " year" : " years");
}

std::string format_duration(double seconds) {
  if (seconds < 1) return "<1s";
  return format_duration(BigInt(std::floor(seconds + 0.5)));
}

}  // namespace pwlab::attack
