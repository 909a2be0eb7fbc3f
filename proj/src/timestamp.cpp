#include "copnet/timestamp.hpp"

#include <cctype>

#include "copnet/util.hpp"

namespace copnet {

namespace {

bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static const int dim[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && leap(y)) return 29;
  return dim[m - 1];
}

// Expects exactly `width` digits at text[pos].
int read_digits(const std::string& text, std::size_t pos, int width) {
  int value = 0;
  for (int i = 0; i < width; ++i) {
    char c = pos + i < text.size() ? text[pos + i] : '\0';
    if (!std::isdigit(static_cast<unsigned char>(c))) return -1;
    value = value * 10 + (c - '0');
  }
  return value;
}

}  // namespace

int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
                       static_cast<unsigned>(d) - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

void civil_from_days(int64_t z, int& year, int& month, int& day) {
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int64_t y = static_cast<int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  month = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  year = static_cast<int>(y + (month <= 2));
}

Timestamp parse_timestamp(const std::string& text) {
  auto bad = [&]() -> Timestamp {
    fail(strprintf("unparseable date '%s'", text.c_str()));
  };

  int y = read_digits(text, 0, 4);
  int mo = read_digits(text, 5, 2);
  int d = read_digits(text, 8, 2);
  if (y < 0 || mo < 0 || d < 0 || text.size() < 10 || text[4] != '-' ||
      text[7] != '-')
    return bad();
  if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo)) return bad();

  Timestamp ts;
  ts.day = days_from_civil(y, mo, d);
  if (text.size() == 10) return ts;

  if (text[10] != 'T' && text[10] != ' ') return bad();
  int hh = read_digits(text, 11, 2);
  int mi = read_digits(text, 14, 2);
  if (hh < 0 || mi < 0 || text.size() < 16 || text[13] != ':') return bad();
  int ss = 0;
  if (text.size() > 16) {
    if (text[16] != ':' || text.size() != 19) return bad();
    ss = read_digits(text, 17, 2);
    if (ss < 0) return bad();
  } else if (text.size() != 16) {
    return bad();
  }
  if (hh > 23 || mi > 59 || ss > 59) return bad();
  ts.sec = hh * 3600 + mi * 60 + ss;
  return ts;
}

std::string format_timestamp(const Timestamp& ts) {
  int y, m, d;
  civil_from_days(ts.day, y, m, d);
  if (ts.sec == 0) return strprintf("%04d-%02d-%02d", y, m, d);
  int hh = ts.sec / 3600, mi = (ts.sec / 60) % 60, ss = ts.sec % 60;
  return strprintf("%04d-%02d-%02dT%02d:%02d:%02d", y, m, d, hh, mi, ss);
}

}  // namespace copnet
