#include "pwlab/attack/rules.h"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <unordered_set>

namespace pwlab::attack {

namespace {

char leet_for(char c) {
  switch (std::tolower(static_cast<unsigned char>(c))) {
    case 'a': return '@';
    case 'e': return '3';
    case 'i': return '1';
    case 'o': return '0';
    case 's': return '$';
    default: return 0;
  }
}

void push_unique(std::vector<std::string>& out, std::unordered_set<std::string>& seen,
                 std::string v) {
  if (seen.insert(v).second) out.push_back(std::move(v));
}

std::string trimmed(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

RuleSet::RuleSet(std::vector<Rule> rules) : rules_(std::move(rules)) {
  for (const Rule& r : rules_) {
    if (r.kind == RuleKind::append_digit && (r.arg < '0' || r.arg > '9'))
      throw std::invalid_argument("append-digit needs a digit argument");
    if (r.kind == RuleKind::append_symbol &&
        (r.arg < 0x21 || r.arg > 0x7e || std::isalnum(static_cast<unsigned char>(r.arg))))
      throw std::invalid_argument("append-symbol needs a printable symbol argument");
  }
}

RuleSet RuleSet::parse(std::string_view text) {
  std::vector<Rule> rules;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string tok = trimmed(text.substr(pos, comma == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : comma - pos));
    pos = comma == std::string_view::npos ? text.size() + 1 : comma + 1;
    if (tok.empty()) continue;

    if (tok == "identity") rules.push_back({RuleKind::identity});
    else if (tok == "lowercase") rules.push_back({RuleKind::lowercase});
    else if (tok == "uppercase") rules.push_back({RuleKind::uppercase});
    else if (tok == "capitalize") rules.push_back({RuleKind::capitalize});
    else if (tok == "toggle") rules.push_back({RuleKind::toggle_case});
    else if (tok == "leet") rules.push_back({RuleKind::leet});
    else if (tok == "append-digits")
      for (char d = '0'; d <= '9'; ++d) rules.push_back({RuleKind::append_digit, d});
    else if (tok == "append-symbols")
      for (char c : std::string_view("!@#$%^&*")) rules.push_back({RuleKind::append_symbol, c});
    else if (tok.starts_with("append-digit:") && tok.size() == 14)
      rules.push_back({RuleKind::append_digit, tok[13]});
    else if (tok.starts_with("append-symbol:") && tok.size() == 15)
      rules.push_back({RuleKind::append_symbol, tok[14]});
    else
      throw std::invalid_argument("unknown rule token: " + tok);
  }
  return RuleSet(std::move(rules));
}

std::string RuleSet::describe() const {
  std::string out;
  for (const Rule& r : rules_) {
    if (!out.empty()) out += ",";
    switch (r.kind) {
      case RuleKind::identity: out += "identity"; break;
      case RuleKind::lowercase: out += "lowercase"; break;
      case RuleKind::uppercase: out += "uppercase"; break;
      case RuleKind::capitalize: out += "capitalize"; break;
      case RuleKind::toggle_case: out += "toggle"; break;
      case RuleKind::append_digit: out += std::string("append-digit:") + r.arg; break;
      case RuleKind::append_symbol: out += std::string("append-symbol:") + r.arg; break;
      case RuleKind::leet: out += "leet"; break;
    }
  }
  return out.empty() ? "identity" : out;
}

std::vector<std::string> apply_rules(std::string_view word, const RuleSet& rules) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  std::string w(word);

  auto apply_one = [&](const Rule& r) {
    switch (r.kind) {
      case RuleKind::identity:
        push_unique(out, seen, w);
        break;
      case RuleKind::lowercase: {
        std::string v = w;
        std::transform(v.begin(), v.end(), v.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        push_unique(out, seen, std::move(v));
        break;
      }
      case RuleKind::uppercase: {
        std::string v = w;
        std::transform(v.begin(), v.end(), v.begin(),
                       [](unsigned char c) { return std::toupper(c); });
        push_unique(out, seen, std::move(v));
        break;
      }
      case RuleKind::capitalize: {
        std::string v = w;
        std::transform(v.begin(), v.end(), v.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (!v.empty()) v[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(v[0])));
        push_unique(out, seen, std::move(v));
        break;
      }
      case RuleKind::toggle_case: {
        std::string v = w;
        for (char& c : v) {
          unsigned char u = static_cast<unsigned char>(c);
          c = std::islower(u) ? static_cast<char>(std::toupper(u))
                              : static_cast<char>(std::tolower(u));
        }
        push_unique(out, seen, std::move(v));
        break;
      }
      case RuleKind::append_digit:
      case RuleKind::append_symbol:
        push_unique(out, seen, w + r.arg);
        break;
      case RuleKind::leet: {
        std::string all = w;
        bool any = false;
        for (std::size_t i = 0; i < w.size(); ++i) {
          char sub = leet_for(w[i]);
          if (!sub) continue;
          any = true;
          std::string v = w;
          v[i] = sub;
          push_unique(out, seen, std::move(v));
          all[i] = sub;
        }
        if (any) push_unique(out, seen, std::move(all));
        break;
      }
    }
  };

  if (rules.empty()) {
    push_unique(out, seen, w);
  } else {
    for (const Rule& r : rules.rules()) apply_one(r);
  }
  return out;
}

}  // namespace pwlab::attack
