#include "pwlab/defense/store.h"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pwlab/defense/honeywords.h"

namespace pwlab::defense {

bool CredentialStore::contains(const std::string& user_id) const {
  std::lock_guard lock(mu_);
  return records_.contains(user_id);
}

std::optional<CredentialRecord> CredentialStore::find(const std::string& user_id) const {
  std::lock_guard lock(mu_);
  auto it = records_.find(user_id);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

void CredentialStore::insert(const CredentialRecord& record) {
  if (record.user_id.empty())
    throw std::invalid_argument("credential record needs a user id");
  if (record.sweetwords.size() < 2)
    throw std::invalid_argument("credential record needs at least 2 sweetwords");
  std::lock_guard lock(mu_);
  if (records_.contains(record.user_id))
    throw std::invalid_argument("user already registered: " + record.user_id);
  records_[record.user_id] = record;
}

std::size_t CredentialStore::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

std::vector<std::string> CredentialStore::user_ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  out.reserve(records_.size());
  for (const auto& [user, _] : records_) out.push_back(user);
  return out;
}

void CredentialStore::save(const std::filesystem::path& path) const {
  std::lock_guard lock(mu_);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write credential store: " + path.string());
  for (const auto& [user, record] : records_) {
    out << user << '\t' << record.sweetwords.size() << '\t'
        << record.sweetwords.front().cost;
    for (const auto& sw : record.sweetwords) out << '\t' << crypto::format_bcrypt(sw);
    out << '\n';
  }
  if (!out.flush())
    throw std::runtime_error("cannot write credential store: " + path.string());
}

void CredentialStore::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read credential store: " + path.string());
  std::map<std::string, CredentialRecord> loaded;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    CredentialRecord record;
    std::size_t count = 0;
    int cost = 0;
    std::string token;
    auto bad = [&](const std::string& why) {
      return std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                ": " + why);
    };
    if (!std::getline(fields, record.user_id, '\t') || record.user_id.empty())
      throw bad("missing user id");
    if (!std::getline(fields, token, '\t')) throw bad("missing sweetword count");
    try {
      count = std::stoul(token);
      if (!std::getline(fields, token, '\t')) throw bad("missing cost");
      cost = std::stoi(token);
    } catch (const std::logic_error&) {
      throw bad("bad numeric field '" + token + "'");
    }
    if (count < 2 || count > kMaxSweetwords) throw bad("sweetword count out of range");
    while (std::getline(fields, token, '\t'))
      record.sweetwords.push_back(crypto::parse_bcrypt(token));
    if (record.sweetwords.size() != count)
      throw bad("sweetword count does not match row");
    for (const auto& sw : record.sweetwords)
      if (sw.cost != cost) throw bad("record cost does not match row cost");
    if (loaded.contains(record.user_id)) throw bad("duplicate user " + record.user_id);
    loaded[record.user_id] = std::move(record);
  }
  std::lock_guard lock(mu_);
  records_ = std::move(loaded);
}

CredentialRecord register_user(CredentialStore& store, Honeychecker& checker,
                               const std::string& user_id, std::string_view password,
                               const RegistrationOptions& options, std::uint64_t seed,
                               std::int64_t now) {
  if (user_id.empty()) throw std::invalid_argument("empty user id");
  for (unsigned char c : user_id)
    if (c <= ' ' || c == 0x7f)
      throw std::invalid_argument("user id contains whitespace or control characters");
  if (options.sweetword_count < 2 || options.sweetword_count > kMaxSweetwords)
    throw std::invalid_argument("sweetword count must be in [2, " +
                                std::to_string(kMaxSweetwords) + "]");
  if (store.contains(user_id))
    throw std::invalid_argument("user already registered: " + user_id);

  StrengthReport report = evaluate_policy(password, options.policy);
  if (!report.accepted) {
    std::string reasons;
    for (const auto& r : report.reasons) reasons += (reasons.empty() ? "" : ", ") + r;
    throw std::invalid_argument("password rejected by policy (" + reasons + ")");
  }

  std::vector<std::string> sweetwords = generate_honeywords(
      password, options.sweetword_count - 1, default_strategies_for(password), seed);

  std::mt19937_64 rng(seed ^ 0x73776565746c6973ULL);
  std::uint32_t real_index =
      static_cast<std::uint32_t>(rng() % options.sweetword_count);
  sweetwords.insert(sweetwords.begin() + real_index, std::string(password));

  CredentialRecord record;
  record.user_id = user_id;
  record.created_at = now;
  record.sweetwords.reserve(sweetwords.size());
  for (const auto& word : sweetwords) {
    auto salt = crypto::random_bcrypt_salt(rng());
    record.sweetwords.push_back(crypto::bcrypt_hash(word, salt, options.cost));
  }

  checker.set_index(user_id, real_index);
  store.insert(record);
  return record;
}

}  // namespace pwlab::defense
