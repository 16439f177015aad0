#pragma once

#include <istream>
#include <ostream>
#include <utility>
#include <vector>

#include "enco/featurize.hpp"
#include "enco/ingestion.hpp"
#include "enco/types.hpp"

namespace enco {

// CSV schemas for the pipeline's stage artifacts. Visits and presence share
// one layout; featurized rows carry the temporal features plus the derived
// duration.

// user,poi,start,end
void write_intervals_csv(std::ostream& out, const std::vector<VisitRecord>& visits);
void write_intervals_csv(std::ostream& out, const std::vector<PresenceInterval>& presence);
std::vector<VisitRecord> read_visits_csv(std::istream& in);
std::vector<PresenceInterval> read_presence_csv(std::istream& in);

// UserA,UserB,PoIId,StartTime,EndTime
void write_events_csv(std::ostream& out, const std::vector<ProximityEvent>& events);
std::vector<ProximityEvent> read_events_csv(std::istream& in, EventKind kind);

// user,phi,iota_s,iota_e,poi,peer,duration_s,duration_bin
void write_features_csv(std::ostream& out, const std::vector<FeaturizedRecord>& records);
std::vector<FeaturizedRecord> read_features_csv(std::istream& in);

// timestamp,ap_id,device_id,session_seconds,status
void write_wifi_csv(std::ostream& out, const std::vector<WifiSessionRecord>& sessions);

// user_id,peer_id,timestamp,duration_seconds,cell_id,activity
void write_cdr_csv(std::ostream& out, const std::vector<CdrActivityRecord>& activities);

// Groups records per user, users in lexicographic order.
std::vector<std::pair<UserId, std::vector<FeaturizedRecord>>> group_by_user(
    const std::vector<FeaturizedRecord>& records);

}  // namespace enco
