#include "copnet/csv.hpp"

#include "copnet/util.hpp"

namespace copnet {

std::optional<CsvRow> CsvReader::next() {
  if (eof_) return std::nullopt;
  int c = in_.get();
  if (c == std::istream::traits_type::eof()) {
    eof_ = true;
    return std::nullopt;
  }

  CsvRow row;
  row.line = line_;
  std::string field;
  bool quoted = false;

  auto end_field = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
  };

  while (true) {
    if (c == std::istream::traits_type::eof()) {
      if (quoted) fail(strprintf("line %zu: unterminated quoted field", row.line));
      eof_ = true;
      end_field();
      return row;
    }
    char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        int peek = in_.peek();
        if (peek == '"') {
          in_.get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line_;
        field.push_back(ch);
      }
    } else if (ch == '"' && field.empty()) {
      quoted = true;
    } else if (ch == ',') {
      end_field();
    } else if (ch == '\r') {
      if (in_.peek() == '\n') in_.get();
      ++line_;
      end_field();
      return row;
    } else if (ch == '\n') {
      ++line_;
      end_field();
      return row;
    } else {
      field.push_back(ch);
    }
    c = in_.get();
  }
}

std::string csv_escape(const std::string& field) {
  bool needs_quote = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quote) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  out += "\"";
  return out;
}

}  // namespace copnet
