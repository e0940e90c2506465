#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace oac {

/// A UTC instant with whole-second precision.
///
/// The lexical form used on the RDF wire is `YYYY-MM-DDThh:mm:ssZ`; HTTP
/// headers use the IMF-fixdate form (`Thu, 01 Apr 2010 00:00:00 GMT`).
class DateTime {
 public:
  constexpr DateTime() = default;
  static constexpr DateTime fromUnixSeconds(std::int64_t s) {
    DateTime d;
    d.seconds_ = s;
    return d;
  }

  /// Parse `YYYY-MM-DDThh:mm:ssZ`. Throws DateTimeError otherwise.
  static DateTime parseIso(std::string_view text);
  static std::optional<DateTime> tryParseIso(std::string_view text);
  /// Parse an IMF-fixdate HTTP-date. Throws DateTimeError otherwise.
  static DateTime parseHttpDate(std::string_view text);

  static DateTime now();

  std::string toIso() const;
  std::string toHttpDate() const;

  constexpr std::int64_t unixSeconds() const { return seconds_; }

  friend constexpr auto operator<=>(DateTime, DateTime) = default;

 private:
  std::int64_t seconds_ = 0;
};

class DateTimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace oac
