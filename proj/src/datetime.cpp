#include "oac/datetime.hpp"

#include <array>
#include <chrono>
#include <cstdio>

namespace oac {

namespace {

using namespace std::chrono;

constexpr std::array<std::string_view, 7> kWeekdays = {"Sun", "Mon", "Tue", "Wed",
                                                       "Thu", "Fri", "Sat"};
constexpr std::array<std::string_view, 12> kMonths = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                      "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

bool readDigits(std::string_view s, std::size_t pos, std::size_t n, int& out) {
  if (pos + n > s.size()) return false;
  int v = 0;
  for (std::size_t i = 0; i < n; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

std::optional<DateTime> fromFields(int y, int mo, int d, int h, int mi, int s) {
  if (mo < 1 || mo > 12 || h > 23 || mi > 59 || s > 59) return std::nullopt;
  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  auto days = sys_days{ymd}.time_since_epoch().count();
  return DateTime::fromUnixSeconds(std::int64_t{days} * 86400 + h * 3600 + mi * 60 + s);
}

struct CivilFields {
  int yearValue, monthValue, dayValue, hour, minute, second;
  unsigned weekday;
};

CivilFields split(std::int64_t epochSeconds) {
  std::int64_t days = epochSeconds / 86400;
  std::int64_t rem = epochSeconds % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  sys_days sd{std::chrono::days{days}};
  year_month_day ymd{sd};
  weekday wd{sd};
  return {int(ymd.year()), int(unsigned(ymd.month())), int(unsigned(ymd.day())),
          int(rem / 3600), int(rem % 3600 / 60), int(rem % 60), wd.c_encoding()};
}

}  // namespace

std::optional<DateTime> DateTime::tryParseIso(std::string_view s) {
  // YYYY-MM-DDThh:mm:ssZ
  if (s.size() != 20 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' ||
      s[16] != ':' || s[19] != 'Z') {
    return std::nullopt;
  }
  int y, mo, d, h, mi, sec;
  if (!readDigits(s, 0, 4, y) || !readDigits(s, 5, 2, mo) || !readDigits(s, 8, 2, d) ||
      !readDigits(s, 11, 2, h) || !readDigits(s, 14, 2, mi) || !readDigits(s, 17, 2, sec)) {
    return std::nullopt;
  }
  return fromFields(y, mo, d, h, mi, sec);
}

DateTime DateTime::parseIso(std::string_view s) {
  if (auto d = tryParseIso(s)) return *d;
  throw DateTimeError("malformed datetime '" + std::string(s) +
                      "', expected YYYY-MM-DDThh:mm:ssZ");
}

DateTime DateTime::parseHttpDate(std::string_view s) {
  // Thu, 01 Apr 2010 00:00:00 GMT
  auto fail = [&]() -> DateTime {
    throw DateTimeError("malformed HTTP-date '" + std::string(s) + "'");
  };
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.size() != 29 || s[3] != ',' || s[4] != ' ' || s[7] != ' ' || s[11] != ' ' ||
      s[16] != ' ' || s[19] != ':' || s[22] != ':' || s.substr(25) != " GMT") {
    return fail();
  }
  std::size_t wd = 0;
  while (wd < kWeekdays.size() && kWeekdays[wd] != s.substr(0, 3)) ++wd;
  std::size_t mo = 0;
  while (mo < kMonths.size() && kMonths[mo] != s.substr(8, 3)) ++mo;
  if (wd == kWeekdays.size() || mo == kMonths.size()) return fail();
  int d, y, h, mi, sec;
  if (!readDigits(s, 5, 2, d) || !readDigits(s, 12, 4, y) || !readDigits(s, 17, 2, h) ||
      !readDigits(s, 20, 2, mi) || !readDigits(s, 23, 2, sec)) {
    return fail();
  }
  auto dt = fromFields(y, int(mo) + 1, d, h, mi, sec);
  if (!dt || split(dt->unixSeconds()).weekday != wd) return fail();
  return *dt;
}

DateTime DateTime::now() {
  return fromUnixSeconds(
      duration_cast<seconds>(system_clock::now().time_since_epoch()).count());
}

std::string DateTime::toIso() const {
  auto f = split(seconds_);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", f.yearValue, f.monthValue, f.dayValue,
                f.hour, f.minute, f.second);
  return buf;
}

std::string DateTime::toHttpDate() const {
  auto f = split(seconds_);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%s, %02d %s %04d %02d:%02d:%02d GMT",
                kWeekdays[f.weekday].data(), f.dayValue, kMonths[f.monthValue - 1].data(), f.yearValue,
                f.hour, f.minute, f.second);
  return buf;
}

}  // namespace oac
