#include "enco/featurize.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace enco {

DurationBins::DurationBins(std::vector<Seconds> edges) : edges_(std::move(edges)) {
  if (edges_.empty() || edges_.front() != 0) {
    throw std::invalid_argument("duration bins: edges must start at 0");
  }
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i] <= edges_[i - 1]) {
      throw std::invalid_argument("duration bins: edges must be strictly increasing");
    }
  }
  representatives_.resize(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (i + 1 < edges_.size()) {
      representatives_[i] = (static_cast<double>(edges_[i]) + static_cast<double>(edges_[i + 1])) / 2.0;
    } else {
      representatives_[i] = static_cast<double>(edges_[i]) * 1.5;  // open top bin
    }
  }
}

int DurationBins::bin_of(Seconds duration) const {
  if (duration <= 0) throw std::invalid_argument("bin_of: duration must be positive");
  // Left-closed bins: first edge strictly greater than d, minus one.
  auto it = std::upper_bound(edges_.begin(), edges_.end(), duration);
  return static_cast<int>(it - edges_.begin()) - 1;
}

void DurationBins::train(const std::vector<Seconds>& durations) {
  std::vector<std::vector<Seconds>> per_bin(edges_.size());
  for (Seconds d : durations) {
    if (d > 0) per_bin[static_cast<std::size_t>(bin_of(d))].push_back(d);
  }
  for (std::size_t i = 0; i < per_bin.size(); ++i) {
    auto& v = per_bin[i];
    if (v.empty()) continue;
    std::sort(v.begin(), v.end());
    std::size_t mid = v.size() / 2;
    representatives_[i] = v.size() % 2 == 1
                              ? static_cast<double>(v[mid])
                              : (static_cast<double>(v[mid - 1]) + static_cast<double>(v[mid])) / 2.0;
  }
}

double DurationBins::representative(int bin) const {
  return representatives_.at(static_cast<std::size_t>(bin));
}

DurationClass bin_duration(Seconds duration, const DurationBins& bins) {
  int b = bins.bin_of(duration);
  return DurationClass{b, bins.representative(b)};
}

int slots_per_day(int slot_hours) {
  if (slot_hours <= 0 || 24 % slot_hours != 0) {
    throw std::invalid_argument("slot_hours must divide 24");
  }
  return 24 / slot_hours;
}

TemporalContext featurize_timestamp(Timestamp ts, int slot_hours, const Timezone& tz) {
  slots_per_day(slot_hours);  // validates H
  TemporalContext ctx;
  ctx.phi = day_of_week(ts, tz);
  ctx.iota = hour_of_day(ts, tz) / slot_hours;
  return ctx;
}

std::pair<FeaturizedRecord, FeaturizedRecord> featurize_event(const ProximityEvent& event,
                                                              int slot_hours,
                                                              const Timezone& tz,
                                                              const DurationBins& bins) {
  if (event.end <= event.start) {
    throw std::invalid_argument("featurize_event: event must have positive duration");
  }
  TemporalContext at_start = featurize_timestamp(event.start, slot_hours, tz);
  TemporalContext at_end = featurize_timestamp(event.end, slot_hours, tz);

  FeaturizedRecord a;
  a.user = event.user_a;
  a.phi = at_start.phi;
  a.iota_s = at_start.iota;
  a.iota_e = at_end.iota;
  a.poi = event.poi;
  a.peer = event.user_b;
  a.duration_s = event.end - event.start;
  a.duration_bin = bins.bin_of(a.duration_s);

  FeaturizedRecord b = a;
  b.user = event.user_b;
  b.peer = event.user_a;
  return {std::move(a), std::move(b)};
}

std::vector<FeaturizedRecord> featurize_events(std::vector<ProximityEvent> events,
                                               int slot_hours, const Timezone& tz,
                                               const DurationBins& bins) {
  std::sort(events.begin(), events.end(), [](const ProximityEvent& a, const ProximityEvent& b) {
    return std::tie(a.start, a.end, a.user_a, a.user_b, a.poi) <
           std::tie(b.start, b.end, b.user_a, b.user_b, b.poi);
  });
  std::vector<FeaturizedRecord> out;
  out.reserve(events.size() * 2);
  for (const auto& e : events) {
    auto [a, b] = featurize_event(e, slot_hours, tz, bins);
    out.push_back(std::move(a));
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace enco
