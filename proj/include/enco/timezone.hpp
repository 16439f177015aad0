#pragma once

#include <string>

#include "enco/types.hpp"

namespace enco {

// Fixed-offset timezone. The calendar features φ and ι are local-time
// concepts, so every stage that touches a timestamp takes one of these.
// Accepted spellings: "UTC", "UTC+2", "UTC-05:30", "+02:00", "-7", "Z".
// No DST; offsets are constant over the whole trace.
class Timezone {
 public:
  Timezone() = default;

  static Timezone utc() { return Timezone{}; }
  static Timezone from_offset(Seconds offset_seconds);
  static Timezone parse(const std::string& spec);

  Seconds offset() const { return offset_; }
  Timestamp to_local(Timestamp utc_ts) const { return utc_ts + offset_; }

  // Round-trippable form, e.g. "UTC", "UTC+02:00", "UTC-05:30".
  std::string name() const;

  friend bool operator==(const Timezone&, const Timezone&) = default;

 private:
  explicit Timezone(Seconds offset) : offset_(offset) {}
  Seconds offset_ = 0;
};

// Day of week for an epoch timestamp in tz, Monday=1..Sunday=7.
int day_of_week(Timestamp ts, const Timezone& tz);

// Local hour of day, 0..23.
int hour_of_day(Timestamp ts, const Timezone& tz);

// Local second-of-day, 0..86399.
Seconds second_of_day(Timestamp ts, const Timezone& tz);

}  // namespace enco
