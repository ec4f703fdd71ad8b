#pragma once

// Minimal comma-separated reader: plain tokens, no quoting. A quote character
// anywhere is reported rather than guessed at.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "voxsim/core_model.hpp"

namespace voxsim::csv {

struct Row {
  std::size_t line = 0;  // 1-based; the header is line 1
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;

  // Column index by name, or npos.
  std::size_t column(std::string_view name) const;
};

// Blank lines are skipped; CR before LF is dropped; fields are trimmed.
Table read(std::string_view text);

std::string row_where(std::size_t line);

// Strict decimal integer, no sign other than a leading '-', no spaces.
Count parse_count(const std::string& field, const std::string& where);

std::string join(const std::vector<std::string>& fields);

}  // namespace voxsim::csv
