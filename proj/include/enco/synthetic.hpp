#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "enco/featurize.hpp"
#include "enco/ingestion.hpp"
#include "enco/timezone.hpp"
#include "enco/types.hpp"

namespace enco {

// One planted weekly meeting: the pair assigned to it co-locates at `poi`
// every week in slot (phi, iota), with a lognormal duration around
// median_duration_s.
struct SlotSpec {
  int phi = 1;
  int iota = 0;
  int poi = 0;
  Seconds median_duration_s = 3600;
};

// A planted weekly schedule. Users are paired statically (user 2i with
// 2i+1); pair p follows slots[j] for j in [p*slots_per_pair, (p+1)*slots_per_pair).
// With probability noise_rate a meeting's PoI is redrawn uniformly and its
// participants are re-paired within the noised pool of the same slot.
struct ScheduleSpec {
  int n_users = 10;
  int n_pois = 8;
  int n_weeks = 6;
  int slots_per_pair = 6;
  std::vector<SlotSpec> slots;  // length = (n_users / 2) * slots_per_pair
  double noise_rate = 0.0;
  bool weekend_conflict = false;
  std::uint64_t seed = 1;
  double sigma_log = 0.25;
  // Monday 00:00 local time; the default is 2004-01-05 UTC.
  Timestamp epoch_start = 1073260800;

  void validate() const;  // throws std::invalid_argument on infeasible specs
};

// Layout helper: gives each pair its own (φ, ι) contexts with per-meeting
// PoIs such that no two pairs ever share (φ, ι, PoI) — extraction then
// recovers exactly the planted pairwise events. weekend_conflict instead
// builds, per pair, weekday slots and weekend slots that reuse the same ι
// at different PoIs, so the place depends on (φ, ι) jointly.
ScheduleSpec weekly_plan(int n_users, int n_pois, int n_weeks, int slots_per_pair,
                         double noise_rate, bool weekend_conflict, std::uint64_t seed);

struct SyntheticTrace {
  std::vector<VisitRecord> visits;
  // Intended featurized records (two per planted meeting).
  std::vector<FeaturizedRecord> truth;
};

std::string synthetic_user_id(int index);
std::string synthetic_poi_id(int index);

// Deterministic under spec.seed regardless of thread count.
SyntheticTrace generate(const ScheduleSpec& spec, const Timezone& tz, int slot_hours,
                        int threads = 1);

// The WiFi session log consumed by ingestion: one start and one stop row
// per visit.
std::vector<WifiSessionRecord> to_wifi_sessions(const std::vector<VisitRecord>& visits);

}  // namespace enco
