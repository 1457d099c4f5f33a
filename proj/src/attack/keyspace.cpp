#include "pwlab/attack/keyspace.h"

#include <stdexcept>

namespace pwlab::attack {

namespace {

const char kLower[] = "abcdefghijklmnopqrstuvwxyz";
const char kUpper[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
const char kDigits[] = "0123456789";
const char kSpecials7[] = "!@#$%^&";

std::string build_mixed69() {
  return std::string(kLower) + kUpper + kDigits + kSpecials7;
}

}  // namespace

Charset::Charset(std::string_view symbols) : symbols_(symbols) {
  if (symbols_.empty()) throw std::invalid_argument("charset must not be empty");
  index_.fill(-1);
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(symbols_[i]);
    if (c < 0x20 || c == 0x7f)
      throw std::invalid_argument("charset symbols must be printable");
    if (index_[c] >= 0)
      throw std::invalid_argument("charset symbols must be distinct");
    index_[c] = static_cast<std::int16_t>(i);
  }
}

Charset Charset::preset(std::string_view name) {
  if (name == "lower") return Charset(kLower);
  if (name == "upper") return Charset(kUpper);
  if (name == "digits") return Charset(kDigits);
  if (name == "alnum") return Charset(std::string(kLower) + kUpper + kDigits);
  if (name == "mixed69") return Charset(build_mixed69());
  if (name == "full70") return Charset(build_mixed69() + "*");
  throw std::invalid_argument("unknown charset preset: " + std::string(name));
}

Charset Charset::parse(std::string_view text) {
  if (text.starts_with("chars:")) return Charset(text.substr(6));
  return preset(text);
}

std::optional<std::size_t> Charset::index_of(char c) const {
  std::int16_t i = index_[static_cast<unsigned char>(c)];
  if (i < 0) return std::nullopt;
  return static_cast<std::size_t>(i);
}

void validate_range(const LengthRange& range) {
  if (range.min_len < 1) throw std::invalid_argument("min length must be >= 1");
  if (range.min_len > range.max_len)
    throw std::invalid_argument("min length exceeds max length");
  if (range.max_len > kMaxCandidateLength)
    throw std::invalid_argument("max length too large");
}

BigInt keyspace_size(const Charset& charset, std::size_t length) {
  BigInt n = charset.size();
  return boost::multiprecision::pow(n, static_cast<unsigned>(length));
}

BigInt keyspace_size(const Charset& charset, const LengthRange& range, bool cumulative) {
  if (cumulative) return keyspace_size(charset, range);
  validate_range(range);
  return keyspace_size(charset, range.max_len);
}

BigInt keyspace_size(const Charset& charset, const LengthRange& range) {
  validate_range(range);
  BigInt total = 0;
  for (std::size_t len = range.min_len; len <= range.max_len; ++len)
    total += keyspace_size(charset, len);
  return total;
}

std::string candidate_at(const Charset& charset, const LengthRange& range,
                         const BigInt& index) {
  validate_range(range);
  if (index < 0) throw std::out_of_range("candidate index negative");
  BigInt rest = index;
  for (std::size_t len = range.min_len; len <= range.max_len; ++len) {
    BigInt block = keyspace_size(charset, len);
    if (rest >= block) {
      rest -= block;
      continue;
    }
    std::string out(len, charset.at(0));
    BigInt n = charset.size();
    for (std::size_t pos = len; pos-- > 0;) {
      BigInt digit = rest % n;
      rest /= n;
      out[pos] = charset.at(digit.convert_to<std::size_t>());
    }
    return out;
  }
  throw std::out_of_range("candidate index beyond keyspace");
}

BigInt rank(const Charset& charset, const LengthRange& range,
            std::string_view candidate) {
  validate_range(range);
  if (candidate.size() < range.min_len || candidate.size() > range.max_len)
    throw std::invalid_argument("candidate length outside range");
  BigInt base = 0;
  for (std::size_t len = range.min_len; len < candidate.size(); ++len)
    base += keyspace_size(charset, len);
  BigInt n = charset.size();
  BigInt value = 0;
  for (char c : candidate) {
    auto idx = charset.index_of(c);
    if (!idx) throw std::invalid_argument("candidate symbol not in charset");
    value = value * n + static_cast<unsigned>(*idx);
  }
  return base + value;
}

}  // namespace pwlab::attack
