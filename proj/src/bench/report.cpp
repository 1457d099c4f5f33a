#include "pwlab/bench/report.h"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "pwlab/attack/keyspace.h"
#include "pwlab/attack/throughput.h"

namespace pwlab::bench {

namespace {

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string md_escape(const std::string& cell) {
  std::string out;
  for (char c : cell) {
    if (c == '|') out += "\\|";
    else out += c;
  }
  return out;
}

std::string render_rows(const std::vector<std::vector<std::string>>& rows,
                        const std::vector<std::string>& footer, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::csv) {
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        out << (i ? "," : "") << csv_escape(row[i]);
      out << '\n';
    }
  } else {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      out << '|';
      for (const auto& cell : rows[r]) out << ' ' << md_escape(cell) << " |";
      out << '\n';
      if (r == 0) {
        out << '|';
        for (std::size_t i = 0; i < rows[r].size(); ++i) out << " --- |";
        out << '\n';
      }
    }
  }
  if (!footer.empty()) {
    out << '\n';
    for (const auto& line : footer) out << "# " << line << '\n';
  }
  return out.str();
}

std::string seconds_cell(double seconds) {
  return attack::format_duration(seconds);
}

std::string rate_text(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", rate);
  return buf;
}

std::string pair_label(const RunRecord& r) {
  return std::string(attack::attack_algorithm_name(r.algorithm)) + " " + r.attack_name;
}

std::string matrix_cell(const RunRecord& r) {
  if (r.attack_kind == AttackKind::dictionary) {
    if (r.outcome == RunOutcome::cracked) return "1";
    if (r.outcome == RunOutcome::not_cracked && r.search_exhausted) return "0";
    return ">budget";
  }
  switch (r.outcome) {
    case RunOutcome::cracked: return seconds_cell(r.crack_seconds);
    case RunOutcome::estimated: return ">budget";
    case RunOutcome::not_cracked: return r.search_exhausted ? "0" : ">budget";
  }
  return "?";
}

std::string render_matrix(const std::vector<RunRecord>& records, ReportFormat format) {
  std::vector<std::string> pair_order;
  std::map<std::string, const RunRecord*> pair_sample;
  std::vector<std::string> row_order;
  std::set<std::string> seen_rows;
  std::map<std::string, std::map<std::string, const RunRecord*>> cells;
  std::map<std::string, std::string> row_password;

  for (const auto& r : records) {
    std::string pair = pair_label(r);
    if (!pair_sample.contains(pair)) {
      pair_order.push_back(pair);
      pair_sample[pair] = &r;
    }
    std::string row = r.password_id.empty() ? r.target_key : r.password_id;
    if (seen_rows.insert(row).second) row_order.push_back(row);
    cells[row][pair] = &r;  // duplicate journal entries: later wins
    row_password[row] = r.password;
  }
  std::sort(row_order.begin(), row_order.end());

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"id", "password"};
  for (const auto& pair : pair_order) header.push_back(pair);
  rows.push_back(header);

  for (const auto& row : row_order) {
    std::vector<std::string> out{row, row_password[row]};
    for (const auto& pair : pair_order) {
      auto it = cells[row].find(pair);
      out.push_back(it == cells[row].end() ? "" : matrix_cell(*it->second));
    }
    rows.push_back(out);
  }

  std::vector<std::string> footer;
  for (const auto& pair : pair_order) {
    const RunRecord* sample = pair_sample[pair];
    // The journal repeats run-level numbers on each record; prefer one that
    // saw the finished run (recovery records carry zeros).
    for (const auto& r : records)
      if (pair_label(r) == pair && r.run_elapsed_seconds > 0) {
        sample = &r;
        break;
      }
    std::size_t total = 0, cracked = 0;
    for (const auto& r : records)
      if (pair_label(r) == pair) {
        ++total;
        if (r.outcome == RunOutcome::cracked) ++cracked;
      }
    std::string basis;
    double rate = projection_rate(*sample, &basis);
    char line[256];
    std::snprintf(line, sizeof(line),
                  "speed %s: %s guesses/s (%s); run %.1fs, %llu guesses, cracked %zu/%zu",
                  pair.c_str(), rate_text(rate).c_str(), basis.c_str(),
                  sample->run_elapsed_seconds,
                  static_cast<unsigned long long>(sample->run_guesses), cracked, total);
    footer.push_back(line);
  }
  for (const auto& r : records)
    if (r.outcome == RunOutcome::estimated) {
      std::string id = r.password_id.empty() ? r.target_key : r.password_id;
      footer.push_back("projection " + pair_label(r) + " " + id + ": full sweep ~" +
                       attack::format_duration(r.projected_seconds) + " (" +
                       r.rate_basis + ")");
    }
  return render_rows(rows, footer, format);
}

std::string render_keyspace(const std::vector<RunRecord>& records, ReportFormat format) {
  // Representative brute record per algorithm, preferring finished runs.
  std::vector<attack::AttackAlgorithm> alg_order;
  std::map<attack::AttackAlgorithm, const RunRecord*> brute_runs;
  std::string charset_spec;
  for (const auto& r : records) {
    if (r.attack_kind != AttackKind::brute) continue;
    if (charset_spec.empty()) charset_spec = r.charset;
    auto it = brute_runs.find(r.algorithm);
    if (it == brute_runs.end()) {
      alg_order.push_back(r.algorithm);
      brute_runs[r.algorithm] = &r;
    } else if (it->second->run_elapsed_seconds <= 0 && r.run_elapsed_seconds > 0) {
      it->second = &r;
    }
  }
  if (brute_runs.empty())
    throw std::invalid_argument(
        "keyspace schema needs brute-force records to take rates from");

  attack::Charset charset = attack::Charset::parse(charset_spec);

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"length", "keyspace"};
  for (auto alg : alg_order)
    header.push_back(std::string(attack::attack_algorithm_name(alg)) + " time");
  rows.push_back(header);

  std::vector<std::string> footer;
  std::map<attack::AttackAlgorithm, double> rates;
  for (auto alg : alg_order) {
    std::string basis;
    rates[alg] = projection_rate(*brute_runs[alg], &basis);
    footer.push_back("rate " + std::string(attack::attack_algorithm_name(alg)) + ": " +
                     rate_text(rates[alg]) + " guesses/s (" + basis + ")");
  }

  for (std::size_t length = 1; length <= 9; ++length) {
    attack::BigInt space = attack::keyspace_size(charset, length);
    std::vector<std::string> row{std::to_string(length), space.str()};
    for (auto alg : alg_order) {
      double rate = rates[alg];
      row.push_back(rate > 0
                        ? attack::format_duration(attack::estimate_seconds(space, rate))
                        : "?");
    }
    rows.push_back(row);
  }
  return render_rows(rows, footer, format);
}

std::vector<std::string> parse_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"' && cell.empty()) {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(cell);
  return cells;
}

std::vector<std::string> parse_md_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  // Cells sit between pipes; "\|" is a literal pipe inside a cell.
  std::size_t begin = line.front() == '|' ? 1 : 0;
  for (std::size_t i = begin; i < line.size(); ++i) {
    char c = line[i];
    if (c == '\\' && i + 1 < line.size() && line[i + 1] == '|') {
      cell += '|';
      ++i;
    } else if (c == '|') {
      cells.push_back(cell);
      cell.clear();
    } else {
      cell += c;
    }
  }
  if (!cell.empty()) cells.push_back(cell);
  for (auto& c : cells) {
    std::size_t b = c.find_first_not_of(' ');
    if (b == std::string::npos) {
      c.clear();
      continue;
    }
    std::size_t e = c.find_last_not_of(' ');
    c = c.substr(b, e - b + 1);
  }
  return cells;
}

bool md_separator_row(const std::vector<std::string>& cells) {
  if (cells.empty()) return false;
  for (const auto& c : cells)
    if (c.find_first_not_of(":-") != std::string::npos) return false;
  return true;
}

}  // namespace

ReportSchema report_schema_from_name(std::string_view name) {
  if (name == "matrix") return ReportSchema::matrix;
  if (name == "keyspace") return ReportSchema::keyspace;
  throw std::invalid_argument("unknown schema: " + std::string(name));
}

ReportFormat report_format_from_name(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "md" || name == "markdown") return ReportFormat::markdown;
  throw std::invalid_argument("unknown format: " + std::string(name));
}

std::string render_report(const std::vector<RunRecord>& records, ReportSchema schema,
                          ReportFormat format) {
  if (records.empty()) throw std::invalid_argument("no records to report");
  return schema == ReportSchema::matrix ? render_matrix(records, format)
                                        : render_keyspace(records, format);
}

std::vector<std::vector<std::string>> parse_report_cells(const std::string& text,
                                                         ReportFormat format) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.rfind("# ", 0) == 0) continue;
    if (format == ReportFormat::csv) {
      rows.push_back(parse_csv_line(line));
    } else {
      auto cells = parse_md_line(line);
      if (md_separator_row(cells)) continue;
      rows.push_back(cells);
    }
  }
  return rows;
}

}  // namespace pwlab::bench
