#pragma once

#include <string>
#include <vector>

#include "pwlab/bench/runner.h"

namespace pwlab::bench {

enum class ReportSchema { matrix, keyspace };
enum class ReportFormat { csv, markdown };

ReportSchema report_schema_from_name(std::string_view name);
ReportFormat report_format_from_name(std::string_view name);

// matrix: one row per password, one column per algorithm x attack pair.
//   Brute cells: crack time, ">budget" (projection in the footer), or "0"
//   when the whole space was swept without a hit. Dictionary cells: "1",
//   "0", or ">budget" when the budget cut the list short.
// keyspace: one row per candidate length, the exact keyspace size, and a
//   projected sweep time per algorithm from the measured brute rates.
// Both formats end with "# "-prefixed footer lines (checkpoint speeds,
// totals, projections); the cell grid above them is pure CSV / Markdown.
std::string render_report(const std::vector<RunRecord>& records, ReportSchema schema,
                          ReportFormat format);

// Parses the cell grid of a rendered report back into rows of cells,
// ignoring footer/separator lines. Used to test that both formats carry
// identical cells, and handy for downstream scripting.
std::vector<std::vector<std::string>> parse_report_cells(const std::string& text,
                                                         ReportFormat format);

}  // namespace pwlab::bench
