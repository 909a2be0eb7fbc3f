#ifndef COPNET_CSV_HPP
#define COPNET_CSV_HPP

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace copnet {

struct CsvRow {
  std::vector<std::string> fields;
  std::size_t line = 0;  // physical line where the row starts (1-based)
};

/// RFC 4180 reader: comma separator, double-quote quoting with "" escapes,
/// CRLF or LF line ends, quoted fields may span lines.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  /// Next record, or nullopt at end of input. Throws Error on an
  /// unterminated quoted field.
  std::optional<CsvRow> next();

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  bool eof_ = false;
};

/// Quote a field if it contains a separator, quote, or line break.
std::string csv_escape(const std::string& field);

}  // namespace copnet

#endif
