#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "giantatom/config.hpp"

// Subcommand execution: every command produces one numeric table with a fixed
// column order (flags encoded as 0/1) plus human-readable summary notes.

namespace giantatom::cli {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> notes;
};

// command is one of: spectrum, symmetric, mirror, slh-check, simulate, steady,
// design, scenario:inversion, scenario:multiphoton, scenario:anharmonicity,
// preset:<name>.
Table run_command(const std::string& command, const RunConfig& config);

// CSV: header row, '.' decimal, 17 significant digits, '\n' line ends.
std::string to_csv(const Table& table);
// JSON: {"columns": [...], "data": [[...]], "notes": [...]}.
std::string to_json(const Table& table);

// Run the command, write the table to config.output (or `fallback_out` when
// the path is empty), echo notes to `log`. Returns the process exit code;
// failures print a machine-readable error record to `log` in the caller.
int run(const std::string& command, const RunConfig& config, std::ostream& fallback_out,
        std::ostream& log);

}  // namespace giantatom::cli
