#include "enco/ingestion.hpp"

#include <algorithm>
#include <iostream>
#include <stdexcept>

namespace enco {

namespace {

constexpr int kMaxWarnings = 5;

void warn_skipped(const char* what, std::uint64_t row, std::uint64_t skipped_so_far) {
  if (skipped_so_far <= kMaxWarnings) {
    std::cerr << "warning: " << what << ": skipping malformed row " << row << "\n";
  }
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

const char* to_string(Activity a) {
  switch (a) {
    case Activity::voice: return "voice";
    case Activity::text: return "text";
    case Activity::data: return "data";
  }
  return "?";
}

WifiLogParser::WifiLogParser(std::istream& in, WifiColumns columns) : reader_(in) {
  c_ts_ = reader_.require_column(columns.timestamp);
  c_ap_ = reader_.require_column(columns.ap);
  c_dev_ = reader_.require_column(columns.device);
  c_dur_ = reader_.require_column(columns.session_seconds);
  c_status_ = reader_.require_column(columns.status);
}

std::optional<WifiSessionRecord> WifiLogParser::next() {
  std::vector<std::string> f;
  while (reader_.next(f)) {
    ++stats_.rows;
    if (f.size() != reader_.header().size()) {
      ++stats_.skipped;
      warn_skipped("wifi log", stats_.rows, stats_.skipped);
      continue;
    }
    auto ts = csv::parse_int(f[c_ts_]);
    auto dur = csv::parse_int(f[c_dur_]);
    std::string status = lower(f[c_status_]);
    bool status_ok = status == "start" || status == "stop";
    if (!ts || !dur || *dur < 0 || f[c_ap_].empty() || f[c_dev_].empty() || !status_ok) {
      ++stats_.skipped;
      warn_skipped("wifi log", stats_.rows, stats_.skipped);
      continue;
    }
    ++stats_.emitted;
    return WifiSessionRecord{*ts, f[c_ap_], f[c_dev_], *dur,
                             status == "start" ? SessionStatus::start : SessionStatus::stop};
  }
  return std::nullopt;
}

CdrLogParser::CdrLogParser(std::istream& in, CdrColumns columns) : reader_(in) {
  c_user_ = reader_.require_column(columns.user);
  c_peer_ = reader_.require_column(columns.peer);
  c_ts_ = reader_.require_column(columns.timestamp);
  c_dur_ = reader_.require_column(columns.duration_seconds);
  c_cell_ = reader_.require_column(columns.cell);
  c_act_ = reader_.require_column(columns.activity);
}

std::optional<CdrActivityRecord> CdrLogParser::next() {
  std::vector<std::string> f;
  while (reader_.next(f)) {
    ++stats_.rows;
    if (f.size() != reader_.header().size()) {
      ++stats_.skipped;
      warn_skipped("cdr log", stats_.rows, stats_.skipped);
      continue;
    }
    auto ts = csv::parse_int(f[c_ts_]);
    auto dur = csv::parse_int(f[c_dur_]);
    std::string act = lower(f[c_act_]);
    Activity activity;
    if (act == "voice") activity = Activity::voice;
    else if (act == "text" || act == "sms") activity = Activity::text;
    else if (act == "data") activity = Activity::data;
    else {
      ++stats_.skipped;
      warn_skipped("cdr log", stats_.rows, stats_.skipped);
      continue;
    }
    bool duration_ok = dur && *dur >= 0 && (activity == Activity::voice || *dur == 0);
    if (!ts || !duration_ok || f[c_user_].empty() || f[c_cell_].empty()) {
      ++stats_.skipped;
      warn_skipped("cdr log", stats_.rows, stats_.skipped);
      continue;
    }
    CdrActivityRecord rec;
    rec.user = f[c_user_];
    if (!f[c_peer_].empty()) rec.peer_user = f[c_peer_];
    rec.timestamp = *ts;
    rec.duration_seconds = *dur;
    rec.cell = f[c_cell_];
    rec.activity = activity;
    ++stats_.emitted;
    return rec;
  }
  return std::nullopt;
}

std::vector<WifiSessionRecord> parse_wifi_log(std::istream& in, ParseStats& stats,
                                              WifiColumns columns) {
  WifiLogParser parser(in, std::move(columns));
  std::vector<WifiSessionRecord> out;
  while (auto rec = parser.next()) out.push_back(std::move(*rec));
  stats = parser.stats();
  return out;
}

std::vector<CdrActivityRecord> parse_cdr_log(std::istream& in, ParseStats& stats,
                                             CdrColumns columns) {
  CdrLogParser parser(in, std::move(columns));
  std::vector<CdrActivityRecord> out;
  while (auto rec = parser.next()) out.push_back(std::move(*rec));
  stats = parser.stats();
  return out;
}

std::vector<VisitRecord> build_visits(std::vector<WifiSessionRecord> sessions,
                                      Seconds min_dwell, Seconds merge_gap,
                                      BuildVisitStats* stats) {
  BuildVisitStats local{};
  local.sessions_in = sessions.size();

  // Total order so that shuffled input pairs identically: a stop sorts
  // before a start at the same instant (it closes the older session).
  std::sort(sessions.begin(), sessions.end(), [](const auto& a, const auto& b) {
    int sa = a.status == SessionStatus::stop ? 0 : 1;
    int sb = b.status == SessionStatus::stop ? 0 : 1;
    return std::tie(a.device, a.ap, a.timestamp, sa, a.session_seconds) <
           std::tie(b.device, b.ap, b.timestamp, sb, b.session_seconds);
  });

  // Pair start/stop per (device, ap). Unmatched records fall back to their
  // session_seconds field; with no usable length they are dropped and tallied.
  std::vector<VisitRecord> raw;
  const WifiSessionRecord* pending_start = nullptr;

  auto close_pending = [&](const WifiSessionRecord& s) {
    if (s.session_seconds > 0) {
      raw.push_back({s.device, s.ap, s.timestamp, s.timestamp + s.session_seconds});
    } else {
      ++local.dropped_unpaired;
    }
  };

  for (std::size_t i = 0; i < sessions.size(); ++i) {
    const auto& s = sessions[i];
    bool same_group = pending_start && pending_start->device == s.device && pending_start->ap == s.ap;
    if (pending_start && !same_group) {
      close_pending(*pending_start);
      pending_start = nullptr;
    }
    if (s.status == SessionStatus::start) {
      if (pending_start) close_pending(*pending_start);
      pending_start = &s;
    } else {
      if (pending_start) {
        if (s.timestamp > pending_start->timestamp) {
          raw.push_back({s.device, s.ap, pending_start->timestamp, s.timestamp});
        } else {
          ++local.dropped_unpaired;
        }
        pending_start = nullptr;
      } else if (s.session_seconds > 0) {
        raw.push_back({s.device, s.ap, s.timestamp - s.session_seconds, s.timestamp});
      } else {
        ++local.dropped_unpaired;
      }
    }
  }
  if (pending_start) close_pending(*pending_start);

  std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
    return std::tie(a.user, a.poi, a.arrival, a.departure) <
           std::tie(b.user, b.poi, b.arrival, b.departure);
  });

  // Ping-pong smoothing: merge same-user same-AP visits whose gap is at most
  // merge_gap (overlaps included), then apply the dwell filter.
  std::vector<VisitRecord> out;
  for (auto& v : raw) {
    if (!out.empty() && out.back().user == v.user && out.back().poi == v.poi &&
        v.arrival - out.back().departure <= merge_gap) {
      out.back().departure = std::max(out.back().departure, v.departure);
      ++local.merged_gaps;
    } else {
      out.push_back(v);
    }
  }

  std::vector<VisitRecord> kept;
  kept.reserve(out.size());
  for (auto& v : out) {
    if (v.departure - v.arrival >= min_dwell) {
      kept.push_back(std::move(v));
    } else {
      ++local.dropped_short;
    }
  }
  local.visits_out = kept.size();
  if (stats) *stats = local;
  return kept;
}

std::vector<PresenceInterval> build_presence(std::vector<CdrActivityRecord> activities,
                                             Seconds t_h) {
  std::vector<PresenceInterval> windows;
  windows.reserve(activities.size());
  for (const auto& a : activities) {
    windows.push_back({a.user, a.cell, a.timestamp - t_h, a.timestamp + t_h + a.duration_seconds});
  }

  std::sort(windows.begin(), windows.end(), [](const auto& a, const auto& b) {
    return std::tie(a.user, a.poi, a.start, a.end) < std::tie(b.user, b.poi, b.start, b.end);
  });

  std::vector<PresenceInterval> out;
  for (auto& w : windows) {
    if (!out.empty() && out.back().user == w.user && out.back().poi == w.poi &&
        w.start <= out.back().end) {
      out.back().end = std::max(out.back().end, w.end);
    } else {
      out.push_back(std::move(w));
    }
  }
  return out;
}

}  // namespace enco
