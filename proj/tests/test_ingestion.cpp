#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "enco/ingestion.hpp"

using namespace enco;

TEST_CASE("wifi parser maps fields directly") {
  std::istringstream in(
      "timestamp,ap_id,device_id,session_seconds,status\n"
      "1073174400,aa,01,1800,start\n");
  ParseStats stats;
  auto records = parse_wifi_log(in, stats);
  REQUIRE(records.size() == 1);
  CHECK(records[0] == WifiSessionRecord{1073174400, "aa", "01", 1800, SessionStatus::start});
  CHECK(stats.rows == 1);
  CHECK(stats.emitted == 1);
  CHECK(stats.skipped == 0);
}

TEST_CASE("wifi parser skips malformed lines with a tally") {
  std::istringstream in(
      "timestamp,ap_id,device_id,session_seconds,status\n"
      "notanumber,aa,01,1800,start\n"
      "1000,aa,01,60,stop\n"
      "1000,aa,01,60\n"
      "1000,aa,01,60,unknown\n");
  ParseStats stats;
  auto records = parse_wifi_log(in, stats);
  CHECK(records.size() == 1);
  CHECK(stats.rows == 4);
  CHECK(stats.skipped == 3);
  CHECK(stats.emitted + stats.skipped == stats.rows);  // conservation
}

TEST_CASE("wifi parser on empty stream") {
  std::istringstream in("timestamp,ap_id,device_id,session_seconds,status\n");
  ParseStats stats;
  CHECK(parse_wifi_log(in, stats).empty());
  CHECK(stats.rows == 0);
}

TEST_CASE("wifi parser requires the header") {
  std::istringstream in("timestamp,ap_id,device_id\n1,2,3\n");
  CHECK_THROWS(WifiLogParser{in});
}

TEST_CASE("wifi parser honours a column remap") {
  std::istringstream in("ts,ap,dev,len,st\n5,x,u,9,stop\n");
  WifiColumns cols;
  cols.timestamp = "ts";
  cols.ap = "ap";
  cols.device = "dev";
  cols.session_seconds = "len";
  cols.status = "st";
  ParseStats stats;
  auto records = parse_wifi_log(in, stats, cols);
  REQUIRE(records.size() == 1);
  CHECK(records[0].ap == "x");
  CHECK(records[0].status == SessionStatus::stop);
}

TEST_CASE("cdr parser parses activities and optional peer") {
  std::istringstream in(
      "user_id,peer_id,timestamp,duration_seconds,cell_id,activity\n"
      "u1,u2,10000,60,c1,voice\n"
      "u1,,10000,0,c1,text\n"
      "u1,,10000,0,c1,data\n"
      "u1,,10000,60,c1,text\n");  // text with nonzero duration is malformed
  ParseStats stats;
  auto records = parse_cdr_log(in, stats);
  REQUIRE(records.size() == 3);
  CHECK(records[0].peer_user.value() == "u2");
  CHECK(!records[1].peer_user.has_value());
  CHECK(records[2].activity == Activity::data);
  CHECK(stats.skipped == 1);
  CHECK(stats.emitted + stats.skipped == stats.rows);
}

TEST_CASE("build_visits keeps a single above-threshold session") {
  std::vector<WifiSessionRecord> sessions{
      {0, "x", "u", 0, SessionStatus::start},
      {1000, "x", "u", 1000, SessionStatus::stop},
  };
  auto visits = build_visits(sessions);
  REQUIRE(visits.size() == 1);
  CHECK(visits[0] == VisitRecord{"u", "x", 0, 1000});
}

TEST_CASE("build_visits merges a 30s gap and keeps the union") {
  std::vector<WifiSessionRecord> sessions{
      {0, "x", "u", 0, SessionStatus::start},
      {500, "x", "u", 500, SessionStatus::stop},
      {530, "x", "u", 0, SessionStatus::start},
      {1000, "x", "u", 470, SessionStatus::stop},
  };
  BuildVisitStats stats;
  auto visits = build_visits(sessions, 900, 60, &stats);
  REQUIRE(visits.size() == 1);
  CHECK(visits[0] == VisitRecord{"u", "x", 0, 1000});
  CHECK(stats.merged_gaps == 1);
}

TEST_CASE("build_visits drops below-threshold visits") {
  std::vector<WifiSessionRecord> sessions{
      {0, "x", "u", 0, SessionStatus::start},
      {600, "x", "u", 600, SessionStatus::stop},
  };
  BuildVisitStats stats;
  CHECK(build_visits(sessions, 900, 60, &stats).empty());
  CHECK(stats.dropped_short == 1);
}

TEST_CASE("build_visits reconstructs unmatched sessions from session_seconds") {
  std::vector<WifiSessionRecord> sessions{
      // stop without start, length present
      {5000, "x", "u", 2000, SessionStatus::stop},
      // start without stop, length present
      {9000, "y", "u", 1500, SessionStatus::start},
      // start without stop, no length: dropped
      {20000, "z", "u", 0, SessionStatus::start},
  };
  BuildVisitStats stats;
  auto visits = build_visits(sessions, 900, 60, &stats);
  REQUIRE(visits.size() == 2);
  CHECK(visits[0] == VisitRecord{"u", "x", 3000, 5000});
  CHECK(visits[1] == VisitRecord{"u", "y", 9000, 10500});
  CHECK(stats.dropped_unpaired == 1);
}

TEST_CASE("build_visits output is per-user per-poi disjoint and dwell-filtered") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<Timestamp> ts(0, 100000);
  std::uniform_int_distribution<Seconds> len(1, 4000);
  std::uniform_int_distribution<int> pick(0, 2);
  std::vector<WifiSessionRecord> sessions;
  for (int i = 0; i < 400; ++i) {
    Timestamp start = ts(rng);
    Seconds duration = len(rng);
    std::string user = "u" + std::to_string(pick(rng));
    std::string ap = "a" + std::to_string(pick(rng));
    sessions.push_back({start, ap, user, 0, SessionStatus::start});
    sessions.push_back({start + duration, ap, user, duration, SessionStatus::stop});
  }

  auto visits = build_visits(sessions, 900, 60);
  for (const auto& v : visits) CHECK(v.departure - v.arrival >= 900);
  for (std::size_t i = 1; i < visits.size(); ++i) {
    const auto& prev = visits[i - 1];
    const auto& cur = visits[i];
    if (prev.user == cur.user && prev.poi == cur.poi) {
      CHECK(cur.arrival > prev.departure);  // disjoint, gaps <= 60 were merged
      CHECK(cur.arrival - prev.departure > 60);
    }
  }

  // Merging is order-independent.
  std::shuffle(sessions.begin(), sessions.end(), rng);
  CHECK(build_visits(sessions, 900, 60) == visits);
}

TEST_CASE("build_presence applies the T_h window formula") {
  // voice: [t - 900, t + 900 + Td]
  auto voice = build_presence({{"u", {}, 10000, 60, "c", Activity::voice}});
  REQUIRE(voice.size() == 1);
  CHECK(voice[0] == PresenceInterval{"u", "c", 9100, 10960});

  // text: Td = 0
  auto text = build_presence({{"u", {}, 10000, 0, "c", Activity::text}});
  REQUIRE(text.size() == 1);
  CHECK(text[0] == PresenceInterval{"u", "c", 9100, 10900});
}

TEST_CASE("build_presence merges overlapping windows of one user at one cell") {
  auto merged = build_presence({
      {"u", {}, 10000, 0, "c", Activity::text},   // [9100, 10900]
      {"u", {}, 11400, 0, "c", Activity::text},   // [10500, 12300]
  });
  REQUIRE(merged.size() == 1);
  CHECK(merged[0] == PresenceInterval{"u", "c", 9100, 12300});
}

TEST_CASE("build_presence output is pairwise disjoint per user and cell") {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<Timestamp> ts(0, 50000);
  std::uniform_int_distribution<int> pick(0, 2);
  std::vector<CdrActivityRecord> activities;
  for (int i = 0; i < 300; ++i) {
    activities.push_back({"u" + std::to_string(pick(rng)),
                          {},
                          ts(rng),
                          pick(rng) == 0 ? 0 : 120,
                          "c" + std::to_string(pick(rng)),
                          Activity::voice});
  }
  auto intervals = build_presence(activities);
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    const auto& prev = intervals[i - 1];
    const auto& cur = intervals[i];
    if (prev.user == cur.user && prev.poi == cur.poi) CHECK(cur.start > prev.end);
  }
  std::shuffle(activities.begin(), activities.end(), rng);
  CHECK(build_presence(activities) == intervals);
}
