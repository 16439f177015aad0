#include <doctest.h>

#include <stdexcept>

#include <random>

#include "enco/featurize.hpp"

using namespace enco;

namespace {

// 2004-01-05 00:00 UTC was a Monday.
constexpr Timestamp kMonday = 1073260800;

Timestamp at(int day_offset, int hour, int minute) {
  return kMonday + day_offset * 86400 + hour * 3600 + minute * 60;
}

}  // namespace

TEST_CASE("featurize_timestamp slots and weekdays") {
  Timezone utc = Timezone::utc();
  // Monday 14:37 -> phi 1, iota 7
  CHECK(featurize_timestamp(at(0, 14, 37), 2, utc) == TemporalContext{1, 7});
  // Sunday 00:00 -> phi 7, iota 0
  CHECK(featurize_timestamp(at(6, 0, 0), 2, utc) == TemporalContext{7, 0});
  // Wednesday 23:59 -> phi 3, iota 11
  CHECK(featurize_timestamp(at(2, 23, 59), 2, utc) == TemporalContext{3, 11});
}

TEST_CASE("featurize_timestamp respects the timezone") {
  // 23:30 UTC Monday is 01:30 Tuesday at UTC+2.
  Timestamp ts = at(0, 23, 30);
  CHECK(featurize_timestamp(ts, 2, Timezone::utc()) == TemporalContext{1, 11});
  CHECK(featurize_timestamp(ts, 2, Timezone::parse("UTC+2")) == TemporalContext{2, 0});
}

TEST_CASE("H must divide 24") {
  CHECK_THROWS_AS(featurize_timestamp(0, 5, Timezone::utc()), std::invalid_argument);
  CHECK(slots_per_day(2) == 12);
  CHECK(slots_per_day(24) == 1);
  CHECK_THROWS(slots_per_day(0));
}

TEST_CASE("featurize_timestamp is one-week periodic and slot-stable") {
  Timezone tz = Timezone::parse("UTC+1");
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<Timestamp> any(0, 2000000000);
  for (int i = 0; i < 2000; ++i) {
    Timestamp ts = any(rng);
    CHECK(featurize_timestamp(ts, 2, tz) == featurize_timestamp(ts + 7 * 86400, 2, tz));

    // Any two timestamps in the same local 2h window share iota.
    Seconds into_slot = second_of_day(ts, tz) % 7200;
    Timestamp slot_start = ts - into_slot;
    CHECK(featurize_timestamp(slot_start, 2, tz).iota == featurize_timestamp(ts, 2, tz).iota);
  }
}

TEST_CASE("duration bins: edge conventions") {
  DurationBins bins;
  CHECK(bins.n_bins() == 6);
  CHECK(bins.bin_of(1200) == 1);    // 15-30 min
  CHECK(bins.bin_of(900) == 1);     // left-closed edge
  CHECK(bins.bin_of(899) == 0);
  CHECK(bins.bin_of(90000) == 5);   // open-ended top bin
  CHECK(bins.bin_of(1) == 0);
  CHECK_THROWS(bins.bin_of(0));
  CHECK_THROWS(DurationBins({0, 100, 100}));
  CHECK_THROWS(DurationBins({100, 200}));
}

TEST_CASE("duration binning is monotone") {
  DurationBins bins;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<Seconds> d(1, 30000);
  for (int i = 0; i < 1000; ++i) {
    Seconds a = d(rng), b = d(rng);
    if (a > b) std::swap(a, b);
    CHECK(bins.bin_of(a) <= bins.bin_of(b));
  }
}

TEST_CASE("bin representatives: trained median with midpoint fallback") {
  DurationBins bins;
  CHECK(bins.representative(0) == doctest::Approx(450));      // (0+900)/2
  CHECK(bins.representative(5) == doctest::Approx(21600));    // 1.5x lower edge of open bin
  bins.train({1000, 1200, 1700});
  CHECK(bins.representative(1) == doctest::Approx(1200));     // odd count: middle
  bins.train({1000, 1200, 1400, 1700});
  CHECK(bins.representative(1) == doctest::Approx(1300));     // even count: mean of middle two
  CHECK(bins.representative(0) == doctest::Approx(450));      // untrained bin keeps fallback
  CHECK(bin_duration(1000, bins) == DurationClass{1, 1300});
}

TEST_CASE("featurize_event yields two symmetric records") {
  DurationBins bins;
  ProximityEvent e{EventKind::encounter, "A", "B", "p", at(0, 9, 0), at(0, 10, 30)};
  auto [a, b] = featurize_event(e, 2, Timezone::utc(), bins);

  CHECK(a.user == "A");
  CHECK(a.peer == "B");
  CHECK(a.phi == 1);
  CHECK(a.iota_s == 4);
  CHECK(a.iota_e == 5);
  CHECK(a.poi == "p");
  CHECK(a.duration_s == 5400);
  CHECK(a.duration_bin == 3);  // [3600, 7200)

  CHECK(b.user == "B");
  CHECK(b.peer == "A");
  b.user = a.user;
  b.peer = a.peer;
  CHECK(a == b);  // everything else identical
}

TEST_CASE("midnight-crossing events anchor phi to the start") {
  DurationBins bins;
  ProximityEvent e{EventKind::encounter, "A", "B", "p", at(0, 23, 30), at(1, 0, 30)};
  auto [a, _] = featurize_event(e, 2, Timezone::utc(), bins);
  CHECK(a.phi == 1);
  CHECK(a.iota_s == 11);
  CHECK(a.iota_e == 0);
}

TEST_CASE("featurize_events produces exactly two records per event") {
  DurationBins bins;
  std::vector<ProximityEvent> events{
      {EventKind::encounter, "A", "B", "p", at(0, 9, 0), at(0, 10, 0)},
      {EventKind::encounter, "A", "C", "q", at(1, 9, 0), at(1, 9, 20)},
  };
  CHECK(featurize_events(events, 2, Timezone::utc(), bins).size() == 4);
  CHECK_THROWS(featurize_event({EventKind::encounter, "A", "B", "p", 100, 100}, 2,
                               Timezone::utc(), bins));
}
