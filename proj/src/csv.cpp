#include "csv.hpp"

#include <charconv>

namespace voxsim::csv {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

bool blank(std::string_view line) {
  for (char c : line) {
    if (c != ' ' && c != '\t') return false;
  }
  return true;
}

}  // namespace

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::string::npos;
}

std::string row_where(std::size_t line) { return "row " + std::to_string(line); }

Table read(std::string_view text) {
  if (text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  Table table;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (blank(line)) continue;
    if (line.find('"') != std::string_view::npos) {
      throw Error(ErrorCode::QuotedField, row_where(line_no),
                  "quoted fields are not supported; remove the quotes and any embedded commas");
    }
    auto fields = split(line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      for (std::size_t i = 0; i < table.header.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
          if (table.header[i] == table.header[j]) {
            throw Error(ErrorCode::DuplicateColumn, row_where(line_no),
                        "column '" + table.header[i] + "' appears twice");
          }
        }
      }
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw Error(ErrorCode::FieldCountMismatch, row_where(line_no),
                  "expected " + std::to_string(table.header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    }
    table.rows.push_back(Row{line_no, std::move(fields)});
  }
  if (!have_header) {
    throw Error(ErrorCode::MissingColumn, row_where(1), "file has no header row");
  }
  return table;
}

Count parse_count(const std::string& field, const std::string& where) {
  Count value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    throw Error(ErrorCode::NonIntegerCount, where, "'" + field + "' is not an integer count");
  }
  return value;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += fields[i];
  }
  return out;
}

}  // namespace voxsim::csv
