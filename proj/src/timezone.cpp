#include "enco/timezone.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace enco {

namespace {

// Floored division so negative local timestamps land in the right day.
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Timezone Timezone::from_offset(Seconds offset_seconds) {
  if (offset_seconds <= -86400 || offset_seconds >= 86400) {
    throw std::invalid_argument("timezone offset out of range");
  }
  return Timezone(offset_seconds);
}

Timezone Timezone::parse(const std::string& spec) {
  std::string s = spec;
  if (s.empty() || s == "UTC" || s == "utc" || s == "Z") return utc();
  if (s.rfind("UTC", 0) == 0 || s.rfind("utc", 0) == 0) s = s.substr(3);
  if (s.empty()) return utc();

  int sign = 1;
  std::size_t i = 0;
  if (s[0] == '+') {
    i = 1;
  } else if (s[0] == '-') {
    sign = -1;
    i = 1;
  }
  if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) {
    throw std::invalid_argument("unparseable timezone: " + spec);
  }

  long hours = 0;
  long minutes = 0;
  std::size_t j = i;
  while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
  hours = std::strtol(s.substr(i, j - i).c_str(), nullptr, 10);
  if (j < s.size()) {
    if (s[j] != ':' || j + 1 >= s.size()) {
      throw std::invalid_argument("unparseable timezone: " + spec);
    }
    std::size_t k = j + 1;
    while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
    if (k != s.size()) throw std::invalid_argument("unparseable timezone: " + spec);
    minutes = std::strtol(s.substr(j + 1, k - j - 1).c_str(), nullptr, 10);
  }
  if (hours > 23 || minutes > 59) {
    throw std::invalid_argument("timezone offset out of range: " + spec);
  }
  return from_offset(sign * (hours * 3600 + minutes * 60));
}

std::string Timezone::name() const {
  if (offset_ == 0) return "UTC";
  Seconds abs_off = offset_ < 0 ? -offset_ : offset_;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "UTC%c%02lld:%02lld", offset_ < 0 ? '-' : '+',
                static_cast<long long>(abs_off / 3600),
                static_cast<long long>((abs_off % 3600) / 60));
  return buf;
}

int day_of_week(Timestamp ts, const Timezone& tz) {
  // 1970-01-01 was a Thursday (phi=4).
  std::int64_t days = floor_div(tz.to_local(ts), 86400);
  return static_cast<int>((days % 7 + 7 + 3) % 7) + 1;
}

Seconds second_of_day(Timestamp ts, const Timezone& tz) {
  Timestamp local = tz.to_local(ts);
  std::int64_t days = floor_div(local, 86400);
  return local - days * 86400;
}

int hour_of_day(Timestamp ts, const Timezone& tz) {
  return static_cast<int>(second_of_day(ts, tz) / 3600);
}

}  // namespace enco
