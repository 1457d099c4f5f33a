#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace pwlab::attack {

using BigInt = boost::multiprecision::cpp_int;

// Ordered set of distinct candidate symbols. Order matters: it defines the
// enumeration order of the keyspace.
class Charset {
 public:
  explicit Charset(std::string_view symbols);

  // lower, upper, digits, alnum, mixed69 (letters, digits, !@#$%^&),
  // full70 (mixed69 plus *).
  static Charset preset(std::string_view name);

  // Accepts a preset name or "chars:<literal symbols>".
  static Charset parse(std::string_view text);

  std::size_t size() const { return symbols_.size(); }
  char at(std::size_t i) const { return symbols_[i]; }
  std::optional<std::size_t> index_of(char c) const;
  const std::string& symbols() const { return symbols_; }

  friend bool operator==(const Charset& a, const Charset& b) {
    return a.symbols_ == b.symbols_;
  }

 private:
  std::string symbols_;
  std::array<std::int16_t, 256> index_;
};

struct LengthRange {
  std::size_t min_len = 1;
  std::size_t max_len = 1;
};

// Longest candidate length the enumeration machinery accepts. Anything
// larger is astronomically out of reach anyway.
constexpr std::size_t kMaxCandidateLength = 64;

void validate_range(const LengthRange& range);

// Number of strings over the charset with length in [min_len, max_len],
// i.e. sum of n^L. The per-length count is n^max_len alone; the boolean
// form picks between the two.
BigInt keyspace_size(const Charset& charset, const LengthRange& range);
BigInt keyspace_size(const Charset& charset, std::size_t length);
BigInt keyspace_size(const Charset& charset, const LengthRange& range, bool cumulative);

// Candidates are ordered by length first, then odometer order with the
// leftmost symbol most significant. candidate_at and rank are inverses.
std::string candidate_at(const Charset& charset, const LengthRange& range,
                         const BigInt& index);
BigInt rank(const Charset& charset, const LengthRange& range,
            std::string_view candidate);

}  // namespace pwlab::attack
