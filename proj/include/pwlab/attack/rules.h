#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pwlab::attack {

enum class RuleKind {
  identity,
  lowercase,
  uppercase,
  capitalize,
  toggle_case,
  append_digit,   // arg: '0'..'9'
  append_symbol,  // arg: printable symbol
  leet,           // a->@, e->3, i->1, o->0, s->$
};

struct Rule {
  RuleKind kind = RuleKind::identity;
  char arg = 0;
};

class RuleSet {
 public:
  RuleSet() = default;
  explicit RuleSet(std::vector<Rule> rules);

  // Comma-separated tokens: identity, lowercase, uppercase, capitalize,
  // toggle, leet, append-digit:<d>, append-digits (all ten),
  // append-symbol:<c>, append-symbols (!@#$%^&*).
  static RuleSet parse(std::string_view text);

  const std::vector<Rule>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }
  std::string describe() const;

 private:
  std::vector<Rule> rules_;
};

// Expands a word into candidate variants in rule order, deduplicated with
// first occurrence kept. Leet yields one variant per substitutable position
// plus the all-positions variant.
std::vector<std::string> apply_rules(std::string_view word, const RuleSet& rules);

}  // namespace pwlab::attack
