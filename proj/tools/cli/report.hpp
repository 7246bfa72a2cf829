#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace softphoton::cli {

using Cell = std::variant<std::string, double, std::int64_t>;

struct Report {
  std::string experiment;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;
  std::vector<std::string> grid_fingerprints;  // one per distinct grid, in first-use order
  std::vector<std::pair<std::string, std::string>> grid_spec;
  double wall_time = 0.0;

  void add_row(std::vector<Cell> row);  // throws if the width does not match columns
  void note_grid(const std::string& fingerprint);
};

// Header plus rows, RFC 4180 quoting, CRLF line ends, %.17g numbers.  No
// timing information, so identical runs give identical bytes.
void write_csv(const Report& r, std::ostream& out);
void write_json(const Report& r, std::ostream& out);

std::string cell_text(const Cell& c);

}  // namespace softphoton::cli
