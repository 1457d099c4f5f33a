#include "pwlab/defense/honeywords.h"

#include <algorithm>
#include <cctype>
#include <random>
#include <unordered_map>

#include "pwlab/defense/policy.h"

namespace pwlab::defense {

namespace {

const std::unordered_map<char, std::string>& adjacency_map() {
  static const std::unordered_map<char, std::string> map = [] {
    std::unordered_map<char, std::string> m;
    // Horizontal neighbors within each row, vertical neighbors between
    // letter rows following the usual stagger.
    const char* rows[] = {"1234567890", "qwertyuiop", "asdfghjkl", "zxcvbnm",
                          "!@#$%^&*()"};
    for (const char* row : rows) {
      std::string r(row);
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i > 0) m[r[i]] += r[i - 1];
        if (i + 1 < r.size()) m[r[i]] += r[i + 1];
      }
    }
    auto vertical = [&m](const char* upper, const char* lower) {
      std::string u(upper), l(lower);
      for (std::size_t i = 0; i < u.size() && i < l.size(); ++i) {
        m[u[i]] += l[i];
        m[l[i]] += u[i];
      }
    };
    vertical("qwertyuiop", "asdfghjkl");
    vertical("asdfghjkl", "zxcvbnm");
    return m;
  }();
  return map;
}

bool has_neighbors(char c) {
  char base = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return adjacency_map().contains(base);
}

bool applicable(std::string_view password, HoneywordStrategy s) {
  switch (s) {
    case HoneywordStrategy::keyboard_adjacent:
      return std::any_of(password.begin(), password.end(),
                         [](char c) { return has_neighbors(c); });
    case HoneywordStrategy::digit_suffix_mutation:
      return true;
    case HoneywordStrategy::case_perturbation:
      return std::any_of(password.begin(), password.end(), [](unsigned char c) {
        return std::isalpha(c);
      });
  }
  return false;
}

std::string mutate(std::string_view password, HoneywordStrategy s,
                   std::mt19937_64& rng) {
  std::string out(password);
  switch (s) {
    case HoneywordStrategy::keyboard_adjacent: {
      std::vector<std::size_t> spots;
      for (std::size_t i = 0; i < out.size(); ++i)
        if (has_neighbors(out[i])) spots.push_back(i);
      std::size_t i = spots[rng() % spots.size()];
      char base = static_cast<char>(std::tolower(static_cast<unsigned char>(out[i])));
      const std::string& options = adjacency_map().at(base);
      char repl = options[rng() % options.size()];
      if (std::isupper(static_cast<unsigned char>(out[i])))
        repl = static_cast<char>(std::toupper(static_cast<unsigned char>(repl)));
      out[i] = repl;
      break;
    }
    case HoneywordStrategy::digit_suffix_mutation: {
      if (!out.empty() && std::isdigit(static_cast<unsigned char>(out.back())))
        out.back() = static_cast<char>('0' + rng() % 10);
      else
        out.push_back(static_cast<char>('0' + rng() % 10));
      break;
    }
    case HoneywordStrategy::case_perturbation: {
      std::vector<std::size_t> spots;
      for (std::size_t i = 0; i < out.size(); ++i)
        if (std::isalpha(static_cast<unsigned char>(out[i]))) spots.push_back(i);
      std::size_t flips = 1 + rng() % 2;
      for (std::size_t f = 0; f < flips; ++f) {
        std::size_t i = spots[rng() % spots.size()];
        unsigned char u = static_cast<unsigned char>(out[i]);
        out[i] = std::islower(u) ? static_cast<char>(std::toupper(u))
                                 : static_cast<char>(std::tolower(u));
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::string keyboard_neighbors(char c) {
  char base = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  auto it = adjacency_map().find(base);
  if (it == adjacency_map().end()) return {};
  if (std::isupper(static_cast<unsigned char>(c))) {
    std::string up = it->second;
    std::transform(up.begin(), up.end(), up.begin(),
                   [](unsigned char x) { return std::toupper(x); });
    return up;
  }
  return it->second;
}

std::set<HoneywordStrategy> default_strategies_for(std::string_view password) {
  if (applicable(password, HoneywordStrategy::keyboard_adjacent))
    return {HoneywordStrategy::keyboard_adjacent};
  return {HoneywordStrategy::digit_suffix_mutation};
}

std::vector<std::string> generate_honeywords(std::string_view password,
                                             std::size_t count,
                                             const std::set<HoneywordStrategy>& strategies,
                                             std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("honeyword count must be >= 1");
  if (password.empty()) throw std::invalid_argument("password must not be empty");
  if (strategies.empty()) throw std::invalid_argument("no strategies selected");

  if (password.size() < 2 && strategies.size() == 1 &&
      strategies.contains(HoneywordStrategy::keyboard_adjacent))
    throw StrategyError("password too short for keyboard-adjacent mutation alone");

  std::vector<HoneywordStrategy> usable;
  for (HoneywordStrategy s : strategies)
    if (applicable(password, s)) usable.push_back(s);
  if (usable.empty())
    throw StrategyError("no selected strategy applies to this password");

  LengthClass target = classify_strength(password);
  std::mt19937_64 rng(seed);
  std::vector<std::string> decoys;
  std::set<std::string> seen;
  std::size_t attempts = 0;
  const std::size_t max_attempts = 500 * count + 2000;
  while (decoys.size() < count) {
    if (++attempts > max_attempts)
      throw StrategyError("could not generate enough distinct decoys");
    HoneywordStrategy s = usable[rng() % usable.size()];
    std::string candidate = mutate(password, s, rng);
    if (candidate == password) continue;
    if (classify_strength(candidate) != target) continue;
    if (!seen.insert(candidate).second) continue;
    decoys.push_back(std::move(candidate));
  }
  return decoys;
}

}  // namespace pwlab::defense
