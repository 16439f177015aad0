#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace enco::csv {

// Splits one CSV line. Double-quoted fields may contain commas and doubled
// quotes; this is all the artifact files need.
std::vector<std::string> split_line(const std::string& line);

// Quotes a field only when it needs it.
std::string escape(const std::string& field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Header-driven reader: the first row names the columns, rows are fetched as
// field vectors in header order. Blank lines and '#' comment lines are
// skipped.
class Reader {
 public:
  explicit Reader(std::istream& in);

  const std::vector<std::string>& header() const { return header_; }

  // Column index by name, or nullopt when absent.
  std::optional<std::size_t> column(const std::string& name) const;

  // Like column() but throws with a helpful message listing the header.
  std::size_t require_column(const std::string& name) const;

  // Next data row; false at end of stream. Rows with a field count different
  // from the header are returned as-is — callers decide whether to skip.
  bool next(std::vector<std::string>& fields);

  std::uint64_t rows_read() const { return rows_read_; }

 private:
  std::istream& in_;
  std::vector<std::string> header_;
  std::uint64_t rows_read_ = 0;
};

// Strict numeric field parsing: the whole field must consume.
std::optional<std::int64_t> parse_int(const std::string& s);
std::optional<double> parse_double(const std::string& s);

}  // namespace enco::csv
