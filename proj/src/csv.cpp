#include "enco/csv.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace enco::csv {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c == '\r' && i + 1 == line.size()) {
      // tolerate CRLF input
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string escape(const std::string& field) {
  bool needs_quotes = field.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

Reader::Reader(std::istream& in) : in_(in) {
  std::string line;
  for (;;) {
    if (!std::getline(in_, line)) {
      throw std::runtime_error("csv: empty input, missing header row");
    }
    if (!line.empty() && line[0] == '#') continue;  // provenance comments
    break;
  }
  header_ = split_line(line);
}

std::optional<std::size_t> Reader::column(const std::string& name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Reader::require_column(const std::string& name) const {
  if (auto idx = column(name)) return *idx;
  std::ostringstream msg;
  msg << "csv: missing column '" << name << "' (header has:";
  for (const auto& h : header_) msg << " " << h;
  msg << ")";
  throw std::runtime_error(msg.str());
}

bool Reader::next(std::vector<std::string>& fields) {
  std::string line;
  while (std::getline(in_, line)) {
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    if (line[0] == '#') continue;
    fields = split_line(line);
    ++rows_read_;
    return true;
  }
  return false;
}

std::optional<std::int64_t> parse_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::int64_t value = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  double value = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return value;
}

}  // namespace enco::csv
