#include "pwlab/attack/potfile.h"

#include <fstream>
#include <stdexcept>

namespace pwlab::attack {

std::map<std::string, std::string> Potfile::load() const {
  std::map<std::string, std::string> out;
  std::ifstream in(path_);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) continue;  // tolerate torn trailing writes
    out[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return out;
}

void Potfile::append(std::string_view key, std::string_view plaintext) const {
  std::ofstream out(path_, std::ios::app);
  if (!out) throw std::runtime_error("cannot append to potfile: " + path_.string());
  out << key << '\t' << plaintext << '\n';
  out.flush();
  if (!out) throw std::runtime_error("potfile write failed: " + path_.string());
}

}  // namespace pwlab::attack
