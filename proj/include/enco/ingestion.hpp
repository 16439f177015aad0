#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "enco/csv.hpp"
#include "enco/types.hpp"

namespace enco {

enum class SessionStatus { start, stop };

// One WiFi AP log line: attach/detach of a device with the session length.
struct WifiSessionRecord {
  Timestamp timestamp = 0;
  PoiId ap;
  UserId device;
  Seconds session_seconds = 0;
  SessionStatus status = SessionStatus::start;

  friend bool operator==(const WifiSessionRecord&, const WifiSessionRecord&) = default;
};

enum class Activity { voice, text, data };

const char* to_string(Activity a);

// One CDR line: a phone activity at a cell. duration_seconds is 0 for
// text/data activities.
struct CdrActivityRecord {
  UserId user;
  std::optional<UserId> peer_user;  // callee, kept but unused for colocation
  Timestamp timestamp = 0;
  Seconds duration_seconds = 0;
  PoiId cell;
  Activity activity = Activity::voice;

  friend bool operator==(const CdrActivityRecord&, const CdrActivityRecord&) = default;
};

// Parse tallies: every input row is either emitted or skipped, never lost.
struct ParseStats {
  std::uint64_t rows = 0;
  std::uint64_t emitted = 0;
  std::uint64_t skipped = 0;
};

// Column-name remapping for user-supplied exports; defaults match the
// documented schemas.
struct WifiColumns {
  std::string timestamp = "timestamp";
  std::string ap = "ap_id";
  std::string device = "device_id";
  std::string session_seconds = "session_seconds";
  std::string status = "status";
};

struct CdrColumns {
  std::string user = "user_id";
  std::string peer = "peer_id";
  std::string timestamp = "timestamp";
  std::string duration_seconds = "duration_seconds";
  std::string cell = "cell_id";
  std::string activity = "activity";
};

// Streaming parsers. Malformed rows are counted in stats().skipped (with a
// warning for the first few) and parsing continues. A missing header column
// is fatal.
class WifiLogParser {
 public:
  explicit WifiLogParser(std::istream& in, WifiColumns columns = {});
  std::optional<WifiSessionRecord> next();
  const ParseStats& stats() const { return stats_; }

 private:
  csv::Reader reader_;
  std::size_t c_ts_, c_ap_, c_dev_, c_dur_, c_status_;
  ParseStats stats_;
};

class CdrLogParser {
 public:
  explicit CdrLogParser(std::istream& in, CdrColumns columns = {});
  std::optional<CdrActivityRecord> next();
  const ParseStats& stats() const { return stats_; }

 private:
  csv::Reader reader_;
  std::size_t c_user_, c_peer_, c_ts_, c_dur_, c_cell_, c_act_;
  ParseStats stats_;
};

std::vector<WifiSessionRecord> parse_wifi_log(std::istream& in, ParseStats& stats,
                                              WifiColumns columns = {});
std::vector<CdrActivityRecord> parse_cdr_log(std::istream& in, ParseStats& stats,
                                             CdrColumns columns = {});

struct BuildVisitStats {
  std::uint64_t sessions_in = 0;
  std::uint64_t dropped_unpaired = 0;  // unmatched start/stop with no usable length
  std::uint64_t merged_gaps = 0;       // ping-pong merges applied
  std::uint64_t dropped_short = 0;     // visits below min_dwell
  std::uint64_t visits_out = 0;
};

// Pairs attach/detach sessions into visits, merges same-user same-AP visits
// separated by at most merge_gap (ping-pong smoothing), then drops visits
// shorter than min_dwell. Output is per-user per-PoI disjoint and ordered by
// (user, poi, arrival). Input order does not matter.
std::vector<VisitRecord> build_visits(std::vector<WifiSessionRecord> sessions,
                                      Seconds min_dwell = 900, Seconds merge_gap = 60,
                                      BuildVisitStats* stats = nullptr);

// Expands each activity at cell c, time t, duration Td into the presence
// window [t - t_h, t + t_h + Td] and merges overlapping or touching windows
// of the same user at the same cell. Output ordered by (user, poi, start).
std::vector<PresenceInterval> build_presence(std::vector<CdrActivityRecord> activities,
                                             Seconds t_h = 900);

}  // namespace enco
