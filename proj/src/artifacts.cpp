#include "enco/artifacts.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "enco/csv.hpp"

namespace enco {

namespace {

template <typename Rec>
void write_interval_rows(std::ostream& out, const std::vector<Rec>& rows, Timestamp Rec::* start,
                         Timestamp Rec::* end) {
  csv::write_row(out, {"user", "poi", "start", "end"});
  for (const auto& r : rows) {
    csv::write_row(out, {r.user, r.poi, std::to_string(r.*start), std::to_string(r.*end)});
  }
}

template <typename Rec>
std::vector<Rec> read_interval_rows(std::istream& in, Timestamp Rec::* start,
                                    Timestamp Rec::* end) {
  csv::Reader reader(in);
  std::size_t c_user = reader.require_column("user");
  std::size_t c_poi = reader.require_column("poi");
  std::size_t c_start = reader.require_column("start");
  std::size_t c_end = reader.require_column("end");

  std::vector<Rec> rows;
  std::vector<std::string> f;
  while (reader.next(f)) {
    if (f.size() != reader.header().size()) {
      throw std::runtime_error("interval csv: malformed row " + std::to_string(reader.rows_read()));
    }
    Rec r;
    r.user = f[c_user];
    r.poi = f[c_poi];
    auto s = csv::parse_int(f[c_start]);
    auto e = csv::parse_int(f[c_end]);
    if (!s || !e) {
      throw std::runtime_error("interval csv: bad timestamp on row " +
                               std::to_string(reader.rows_read()));
    }
    r.*start = *s;
    r.*end = *e;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace

void write_intervals_csv(std::ostream& out, const std::vector<VisitRecord>& visits) {
  write_interval_rows(out, visits, &VisitRecord::arrival, &VisitRecord::departure);
}

void write_intervals_csv(std::ostream& out, const std::vector<PresenceInterval>& presence) {
  write_interval_rows(out, presence, &PresenceInterval::start, &PresenceInterval::end);
}

std::vector<VisitRecord> read_visits_csv(std::istream& in) {
  return read_interval_rows<VisitRecord>(in, &VisitRecord::arrival, &VisitRecord::departure);
}

std::vector<PresenceInterval> read_presence_csv(std::istream& in) {
  return read_interval_rows<PresenceInterval>(in, &PresenceInterval::start,
                                              &PresenceInterval::end);
}

void write_events_csv(std::ostream& out, const std::vector<ProximityEvent>& events) {
  csv::write_row(out, {"UserA", "UserB", "PoIId", "StartTime", "EndTime"});
  for (const auto& e : events) {
    csv::write_row(out, {e.user_a, e.user_b, e.poi, std::to_string(e.start),
                         std::to_string(e.end)});
  }
}

std::vector<ProximityEvent> read_events_csv(std::istream& in, EventKind kind) {
  csv::Reader reader(in);
  std::size_t c_a = reader.require_column("UserA");
  std::size_t c_b = reader.require_column("UserB");
  std::size_t c_poi = reader.require_column("PoIId");
  std::size_t c_start = reader.require_column("StartTime");
  std::size_t c_end = reader.require_column("EndTime");

  std::vector<ProximityEvent> events;
  std::vector<std::string> f;
  while (reader.next(f)) {
    if (f.size() != reader.header().size()) {
      throw std::runtime_error("event csv: malformed row " + std::to_string(reader.rows_read()));
    }
    ProximityEvent e;
    e.kind = kind;
    e.user_a = f[c_a];
    e.user_b = f[c_b];
    e.poi = f[c_poi];
    auto s = csv::parse_int(f[c_start]);
    auto t = csv::parse_int(f[c_end]);
    if (!s || !t) {
      throw std::runtime_error("event csv: bad timestamp on row " +
                               std::to_string(reader.rows_read()));
    }
    e.start = *s;
    e.end = *t;
    events.push_back(canonicalize(std::move(e)));
  }
  return events;
}

void write_features_csv(std::ostream& out, const std::vector<FeaturizedRecord>& records) {
  csv::write_row(out, {"user", "phi", "iota_s", "iota_e", "poi", "peer", "duration_s",
                       "duration_bin"});
  for (const auto& r : records) {
    csv::write_row(out, {r.user, std::to_string(r.phi), std::to_string(r.iota_s),
                         std::to_string(r.iota_e), r.poi, r.peer, std::to_string(r.duration_s),
                         std::to_string(r.duration_bin)});
  }
}

std::vector<FeaturizedRecord> read_features_csv(std::istream& in) {
  csv::Reader reader(in);
  std::size_t c_user = reader.require_column("user");
  std::size_t c_phi = reader.require_column("phi");
  std::size_t c_is = reader.require_column("iota_s");
  std::size_t c_ie = reader.require_column("iota_e");
  std::size_t c_poi = reader.require_column("poi");
  std::size_t c_peer = reader.require_column("peer");
  std::size_t c_dur = reader.require_column("duration_s");
  std::size_t c_bin = reader.require_column("duration_bin");

  std::vector<FeaturizedRecord> records;
  std::vector<std::string> f;
  while (reader.next(f)) {
    if (f.size() != reader.header().size()) {
      throw std::runtime_error("features csv: malformed row " +
                               std::to_string(reader.rows_read()));
    }
    FeaturizedRecord r;
    r.user = f[c_user];
    r.poi = f[c_poi];
    r.peer = f[c_peer];
    auto phi = csv::parse_int(f[c_phi]);
    auto is = csv::parse_int(f[c_is]);
    auto ie = csv::parse_int(f[c_ie]);
    auto dur = csv::parse_int(f[c_dur]);
    auto bin = csv::parse_int(f[c_bin]);
    if (!phi || !is || !ie || !dur || !bin) {
      throw std::runtime_error("features csv: bad numeric field on row " +
                               std::to_string(reader.rows_read()));
    }
    r.phi = static_cast<int>(*phi);
    r.iota_s = static_cast<int>(*is);
    r.iota_e = static_cast<int>(*ie);
    r.duration_s = *dur;
    r.duration_bin = static_cast<int>(*bin);
    records.push_back(std::move(r));
  }
  return records;
}

void write_wifi_csv(std::ostream& out, const std::vector<WifiSessionRecord>& sessions) {
  csv::write_row(out, {"timestamp", "ap_id", "device_id", "session_seconds", "status"});
  for (const auto& s : sessions) {
    csv::write_row(out, {std::to_string(s.timestamp), s.ap, s.device,
                         std::to_string(s.session_seconds),
                         s.status == SessionStatus::start ? "start" : "stop"});
  }
}

void write_cdr_csv(std::ostream& out, const std::vector<CdrActivityRecord>& activities) {
  csv::write_row(out, {"user_id", "peer_id", "timestamp", "duration_seconds", "cell_id",
                       "activity"});
  for (const auto& a : activities) {
    csv::write_row(out, {a.user, a.peer_user.value_or(""), std::to_string(a.timestamp),
                         std::to_string(a.duration_seconds), a.cell, to_string(a.activity)});
  }
}

std::vector<std::pair<UserId, std::vector<FeaturizedRecord>>> group_by_user(
    const std::vector<FeaturizedRecord>& records) {
  std::map<UserId, std::vector<FeaturizedRecord>> grouped;
  for (const auto& r : records) grouped[r.user].push_back(r);
  std::vector<std::pair<UserId, std::vector<FeaturizedRecord>>> out;
  out.reserve(grouped.size());
  for (auto& [user, recs] : grouped) out.emplace_back(user, std::move(recs));
  return out;
}

}  // namespace enco
