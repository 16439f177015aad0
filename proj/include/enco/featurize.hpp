#pragma once

#include <array>
#include <utility>
#include <vector>

#include "enco/timezone.hpp"
#include "enco/types.hpp"

namespace enco {

// Duration discretization. Edges are strictly increasing and start at 0;
// bin i covers [edges[i], edges[i+1]) and the last bin is open-ended.
// Representatives come from training (median per bin); untrained bins fall
// back to the bin midpoint (1.5x the lower edge for the open top bin).
class DurationBins {
 public:
  DurationBins() : DurationBins(default_edges()) {}
  explicit DurationBins(std::vector<Seconds> edges);

  static std::vector<Seconds> default_edges() {
    return {0, 900, 1800, 3600, 7200, 14400};
  }

  int bin_of(Seconds duration) const;  // duration must be > 0
  int n_bins() const { return static_cast<int>(edges_.size()); }
  const std::vector<Seconds>& edges() const { return edges_; }

  // Median of training durations per bin; leaves untrained bins at fallback.
  void train(const std::vector<Seconds>& durations);

  double representative(int bin) const;

  friend bool operator==(const DurationBins&, const DurationBins&) = default;

 private:
  std::vector<Seconds> edges_;
  std::vector<double> representatives_;
};

struct DurationClass {
  int bin_index = 0;
  double representative_seconds = 0;

  friend bool operator==(const DurationClass&, const DurationClass&) = default;
};

DurationClass bin_duration(Seconds duration, const DurationBins& bins);

// One side of an event: who, when (φ, ι_s, ι_e), where, with whom, how long.
struct FeaturizedRecord {
  UserId user;
  int phi = 1;     // day of week of the event start, Monday=1
  int iota_s = 0;  // start slot
  int iota_e = 0;  // end slot (may be < iota_s across midnight; not a predictor feature)
  PoiId poi;
  PeerId peer;
  Seconds duration_s = 0;
  int duration_bin = 0;

  friend bool operator==(const FeaturizedRecord&, const FeaturizedRecord&) = default;
};

// φ and ι for one timestamp. H must divide 24 (throws otherwise).
TemporalContext featurize_timestamp(Timestamp ts, int slot_hours, const Timezone& tz);

int slots_per_day(int slot_hours);

// Two records per event, one per participant with the other as peer. φ and
// ι_s come from the start time, ι_e from the end time.
std::pair<FeaturizedRecord, FeaturizedRecord> featurize_event(const ProximityEvent& event,
                                                              int slot_hours,
                                                              const Timezone& tz,
                                                              const DurationBins& bins);

// Featurizes a batch in event start-time order (events are sorted first):
// record order carries the chronology that chronological CV splits rely on.
std::vector<FeaturizedRecord> featurize_events(std::vector<ProximityEvent> events,
                                               int slot_hours, const Timezone& tz,
                                               const DurationBins& bins);

}  // namespace enco
