#include "pwlab/attack/engine.h"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "pwlab/crypto/hash.h"

namespace pwlab::attack {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Shared run state: immutable target index plus the claim/progress atomics
// the workers and the checkpoint monitor coordinate through.
struct RunState {
  const TargetSet& targets;
  std::unordered_map<crypto::Digest, std::vector<std::size_t>, crypto::DigestHasher>
      digest_slots;
  std::vector<std::unique_ptr<std::atomic<bool>>> claimed;
  std::atomic<std::size_t> open_slots{0};
  std::atomic<std::uint64_t> guesses{0};
  std::atomic<bool> stop{false};
  std::atomic<bool> budget_hit{false};
  std::atomic<bool> early_exit{false};

  Clock::time_point start = Clock::now();
  double budget_seconds = 0;

  std::mutex results_mu;
  AttackReport report;
  const EngineOptions* options = nullptr;

  explicit RunState(const TargetSet& ts, const EngineOptions& opt)
      : targets(ts), budget_seconds(opt.budget_seconds), options(&opt) {
    std::unordered_set<std::string> skip(opt.skip_keys.begin(), opt.skip_keys.end());
    claimed.reserve(ts.size());
    std::size_t open = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      bool pre = skip.contains(ts.keys[i]);
      claimed.push_back(std::make_unique<std::atomic<bool>>(pre));
      if (!pre) ++open;
    }
    open_slots = open;
    for (std::size_t i = 0; i < ts.digests.size(); ++i)
      digest_slots[ts.digests[i]].push_back(i);
  }

  bool over_budget() {
    if (budget_seconds > 0 && seconds_since(start) >= budget_seconds) {
      budget_hit = true;
      stop = true;
      return true;
    }
    return false;
  }

  void record_crack(std::size_t slot, std::string_view plaintext) {
    double at = seconds_since(start);
    std::lock_guard lock(results_mu);
    const std::string& key = targets.keys[slot];
    report.cracked[key] = std::string(plaintext);
    report.crack_elapsed[key] = at;
    if (options->on_crack) options->on_crack(key, std::string(plaintext));
    if (open_slots.fetch_sub(1) == 1) stop = true;
  }

  // One candidate against every open slot. Returns hash computations spent.
  std::uint64_t try_candidate(const std::string& candidate) {
    if (targets.algorithm == AttackAlgorithm::bcrypt) {
      std::uint64_t spent = 0;
      for (std::size_t i = 0; i < targets.records.size(); ++i) {
        if (claimed[i]->load(std::memory_order_relaxed)) continue;
        ++spent;
        if (crypto::bcrypt_verify(candidate, targets.records[i]) &&
            !claimed[i]->exchange(true))
          record_crack(i, candidate);
      }
      return spent;
    }

    std::uint8_t raw[32];
    crypto::HashAlgorithm alg;
    if (targets.algorithm == AttackAlgorithm::md5) {
      crypto::md5_raw(reinterpret_cast<const std::uint8_t*>(candidate.data()),
                      candidate.size(), raw);
      alg = crypto::HashAlgorithm::md5;
    } else {
      crypto::sha256_raw(reinterpret_cast<const std::uint8_t*>(candidate.data()),
                         candidate.size(), raw);
      alg = crypto::HashAlgorithm::sha256;
    }
    crypto::Digest d(alg, {raw, crypto::digest_size(alg)});
    auto it = digest_slots.find(d);
    if (it != digest_slots.end())
      for (std::size_t slot : it->second)
        if (!claimed[slot]->exchange(true)) record_crack(slot, candidate);
    return 1;
  }
};

// Samples interval rates at the requested cadence until the run finishes.
class CheckpointMonitor {
 public:
  CheckpointMonitor(RunState& state, double cadence) : state_(state), cadence_(cadence) {
    if (cadence_ > 0) thread_ = std::thread([this] { run(); });
  }

  ~CheckpointMonitor() { stop(); }

  void stop() {
    {
      std::lock_guard lock(mu_);
      done_ = true;
    }
    cv_.notify_all();
    if (thread_.joinable()) thread_.join();
  }

  std::vector<CheckpointRate> rates() {
    std::lock_guard lock(mu_);
    return rates_;
  }

 private:
  void run() {
    std::unique_lock lock(mu_);
    std::uint64_t last_guesses = 0;
    double last_t = 0;
    while (!done_) {
      auto wake = state_.start + std::chrono::duration_cast<Clock::duration>(
                                     std::chrono::duration<double>(last_t + cadence_));
      if (cv_.wait_until(lock, wake, [this] { return done_; })) break;
      double now = seconds_since(state_.start);
      std::uint64_t g = state_.guesses.load();
      double dt = now - last_t;
      if (dt <= 0) continue;
      rates_.push_back({now, static_cast<double>(g - last_guesses) / dt});
      last_guesses = g;
      last_t = now;
    }
  }

  RunState& state_;
  double cadence_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool done_ = false;
  std::vector<CheckpointRate> rates_;
  std::thread thread_;
};

constexpr std::uint64_t kBatch = 1024;

// Advance the per-position symbol indices by `stride` with carries; updates
// only the changed chars of `buf`. Returns false when the length block rolls
// over (enumeration of this length is done for this worker).
bool step_odometer(std::vector<std::uint64_t>& digits, std::string& buf,
                   const Charset& charset, std::uint64_t stride) {
  std::uint64_t carry = stride;
  std::uint64_t n = charset.size();
  for (std::size_t pos = digits.size(); carry != 0 && pos-- > 0;) {
    std::uint64_t v = digits[pos] + carry;
    digits[pos] = v % n;
    carry = v / n;
    buf[pos] = charset.at(static_cast<std::size_t>(digits[pos]));
  }
  return carry == 0;
}

void brute_worker(RunState& state, const Charset& charset, const LengthRange& range,
                  std::size_t worker, std::size_t worker_count) {
  std::uint64_t local = 0;
  std::uint64_t since_check = 0;
  bool bcrypt_mode = state.targets.algorithm == AttackAlgorithm::bcrypt;
  BigInt block_start = 0;

  for (std::size_t len = range.min_len; len <= range.max_len; ++len) {
    BigInt block = keyspace_size(charset, len);
    // First global index in this block assigned to this worker.
    BigInt first_local = (BigInt(worker) - block_start) % BigInt(worker_count);
    if (first_local < 0) first_local += worker_count;
    block_start += block;
    if (first_local >= block) continue;

    std::vector<std::uint64_t> digits(len, 0);
    std::string buf(len, charset.at(0));
    BigInt rest = first_local;
    BigInt n = charset.size();
    for (std::size_t pos = len; pos-- > 0;) {
      digits[pos] = (rest % n).convert_to<std::uint64_t>();
      rest /= n;
      buf[pos] = charset.at(static_cast<std::size_t>(digits[pos]));
    }

    bool more = true;
    while (more) {
      local += state.try_candidate(buf);
      more = step_odometer(digits, buf, charset, worker_count);
      if (++since_check >= kBatch || bcrypt_mode) {
        state.guesses.fetch_add(local, std::memory_order_relaxed);
        local = 0;
        since_check = 0;
        if (state.stop.load(std::memory_order_relaxed) || state.over_budget()) {
          state.early_exit = true;
          return;
        }
      }
    }
    if (state.stop.load(std::memory_order_relaxed)) {
      state.early_exit = true;
      break;
    }
  }
  state.guesses.fetch_add(local);
}

AttackReport finish_run(RunState& state, CheckpointMonitor& monitor, bool exhausted) {
  monitor.stop();
  AttackReport report;
  {
    std::lock_guard lock(state.results_mu);
    report = std::move(state.report);
  }
  report.guesses = state.guesses.load();
  report.elapsed_seconds = seconds_since(state.start);
  report.checkpoint_rates = monitor.rates();
  report.exhausted = exhausted;
  return report;
}

}  // namespace

AttackReport brute_force(const TargetSet& targets, const Charset& charset,
                         const LengthRange& range, const EngineOptions& options) {
  validate_range(range);
  if (options.workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (targets.size() == 0) throw std::invalid_argument("empty target set");

  RunState state(targets, options);
  CheckpointMonitor monitor(state, options.checkpoint_seconds);
  if (state.open_slots.load() == 0) return finish_run(state, monitor, false);

  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < options.workers; ++w)
    pool.emplace_back(brute_worker, std::ref(state), std::cref(charset),
                      std::cref(range), w, options.workers);
  brute_worker(state, charset, range, 0, options.workers);
  for (auto& t : pool) t.join();

  bool exhausted = !state.early_exit.load() && !state.budget_hit.load();
  return finish_run(state, monitor, exhausted);
}

AttackReport dictionary_attack(const TargetSet& targets, std::istream& wordlist,
                               const RuleSet& rules, const EngineOptions& options) {
  if (options.workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (targets.size() == 0) throw std::invalid_argument("empty target set");

  RunState state(targets, options);
  CheckpointMonitor monitor(state, options.checkpoint_seconds);
  if (state.open_slots.load() == 0) return finish_run(state, monitor, false);

  std::mutex queue_mu;
  std::condition_variable queue_cv;
  std::deque<std::vector<std::string>> queue;
  bool producer_done = false;
  constexpr std::size_t kQueueLimit = 64;
  constexpr std::size_t kBatchWords = 256;

  auto worker_fn = [&] {
    std::uint64_t local = 0;
    for (;;) {
      std::vector<std::string> batch;
      {
        std::unique_lock lock(queue_mu);
        queue_cv.wait(lock, [&] {
          return !queue.empty() || producer_done || state.stop.load();
        });
        if (state.stop.load() && queue.empty()) break;
        if (queue.empty()) {
          if (producer_done) break;
          continue;
        }
        batch = std::move(queue.front());
        queue.pop_front();
      }
      queue_cv.notify_all();
      for (const std::string& word : batch) {
        for (const std::string& variant : apply_rules(word, rules))
          local += state.try_candidate(variant);
        if (state.stop.load(std::memory_order_relaxed) || state.over_budget()) break;
      }
      state.guesses.fetch_add(local);
      local = 0;
      if (state.stop.load(std::memory_order_relaxed)) break;
    }
    state.guesses.fetch_add(local);
  };

  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < options.workers; ++w) pool.emplace_back(worker_fn);

  bool consumed_all = true;
  {
    std::vector<std::string> batch;
    std::string line;
    while (std::getline(wordlist, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      batch.push_back(line);
      if (batch.size() >= kBatchWords) {
        std::unique_lock lock(queue_mu);
        queue_cv.wait(lock, [&] { return queue.size() < kQueueLimit || state.stop.load(); });
        if (state.stop.load()) {
          consumed_all = false;
          break;
        }
        queue.push_back(std::move(batch));
        batch.clear();
        queue_cv.notify_all();
      }
    }
    if (consumed_all && !batch.empty()) {
      std::lock_guard lock(queue_mu);
      queue.push_back(std::move(batch));
    }
  }
  {
    std::lock_guard lock(queue_mu);
    producer_done = true;
  }
  queue_cv.notify_all();
  for (auto& t : pool) t.join();

  bool stopped_early = state.stop.load() && state.open_slots.load() > 0;
  bool exhausted = consumed_all && !state.budget_hit.load() && !stopped_early;
  return finish_run(state, monitor, exhausted);
}

}  // namespace pwlab::attack
