#include <charconv>
#include <istream>
#include <map>
#include <optional>
#include <string>

#include "survpower/error.hpp"
#include "survpower/survival.hpp"

namespace survpower {

using detail::fail;

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  cells.push_back(cell);
  for (auto& s : cells) {
    const auto first = s.find_first_not_of(" \t\"");
    const auto last = s.find_last_not_of(" \t\"");
    s = first == std::string::npos ? std::string{} : s.substr(first, last - first + 1);
  }
  return cells;
}

double parse_number(const std::string& text, const std::string& column, std::size_t line) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    fail(ErrorCode::kValidation,
         "line " + std::to_string(line) + ": cannot parse '" + text + "' as a number", column);
  }
  return value;
}

int parse_flag(const std::string& text, const std::string& column, std::size_t line) {
  const double v = parse_number(text, column, line);
  if (v != 0.0 && v != 1.0) {
    fail(ErrorCode::kValidation, "line " + std::to_string(line) + ": " + column + " must be 0 or 1",
         column);
  }
  return static_cast<int>(v);
}

}  // namespace

std::vector<SubjectRecord> read_subject_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kValidation, "CSV is empty; header required", "header");
  const auto header = split_line(line);

  std::optional<std::size_t> time_col, event_col, z_col, weight_col;
  std::map<int, std::size_t> covariate_cols;  // covariate index -> column
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    if (name == "time") time_col = c;
    else if (name == "event") event_col = c;
    else if (name == "z") z_col = c;
    else if (name == "weight") weight_col = c;
    else if (name.size() > 1 && name[0] == 'x') {
      int idx = 0;
      const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
      if (ec == std::errc() && ptr == name.data() + name.size() && idx >= 1) covariate_cols[idx] = c;
      else fail(ErrorCode::kValidation, "unknown column '" + name + "'", name);
    } else {
      fail(ErrorCode::kValidation, "unknown column '" + name + "'", name);
    }
  }
  if (!time_col) fail(ErrorCode::kValidation, "missing column 'time'", "time");
  if (!event_col) fail(ErrorCode::kValidation, "missing column 'event'", "event");
  if (!z_col) fail(ErrorCode::kValidation, "missing column 'z'", "z");
  int expected = 1;
  for (const auto& [idx, col] : covariate_cols) {
    if (idx != expected++) {
      fail(ErrorCode::kValidation, "covariate columns must be x1..xp without gaps", "x");
    }
  }

  std::vector<SubjectRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      fail(ErrorCode::kValidation,
           "line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
               " fields",
           "row");
    }
    SubjectRecord rec;
    rec.time = parse_number(cells[*time_col], "time", line_no);
    if (!(rec.time >= 0.0)) fail(ErrorCode::kValidation, "time must be >= 0", "time");
    rec.event = parse_flag(cells[*event_col], "event", line_no);
    rec.z = parse_flag(cells[*z_col], "z", line_no);
    for (const auto& [idx, col] : covariate_cols) {
      rec.x.push_back(parse_number(cells[col], header[col], line_no));
    }
    if (weight_col) {
      rec.weight = parse_number(cells[*weight_col], "weight", line_no);
      if (!(rec.weight >= 0.0)) fail(ErrorCode::kValidation, "weight must be >= 0", "weight");
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace survpower
