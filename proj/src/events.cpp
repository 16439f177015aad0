#include "enco/events.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "enco/parallel.hpp"

namespace enco {

namespace {

struct Iv {
  const UserId* user;
  Timestamp start;
  Timestamp end;
};

// Sweep over one PoI's intervals sorted by start. The active set holds
// intervals whose end exceeds the sweep position; each incoming interval
// pairs with everything still active. Since per-user intervals are disjoint,
// a user never overlaps itself; the guard below covers malformed input.
void sweep_poi(const PoiId& poi, std::vector<Iv>& ivs, EventKind kind,
               std::vector<ProximityEvent>& out) {
  std::sort(ivs.begin(), ivs.end(), [](const Iv& a, const Iv& b) {
    return std::tie(a.start, a.end, *a.user) < std::tie(b.start, b.end, *b.user);
  });

  // Active set ordered by end time for cheap expiry.
  std::multimap<Timestamp, const Iv*> active;
  for (const auto& iv : ivs) {
    active.erase(active.begin(), active.upper_bound(iv.start));
    for (const auto& [end, other] : active) {
      if (*other->user == *iv.user) continue;
      ProximityEvent e;
      e.kind = kind;
      e.user_a = *other->user;
      e.user_b = *iv.user;
      e.poi = poi;
      e.start = iv.start;  // max of starts: iv starts last in sweep order
      e.end = std::min(iv.end, other->end);
      out.push_back(canonicalize(std::move(e)));
    }
    active.emplace(iv.end, &iv);
  }
}

template <typename Rec>
std::vector<ProximityEvent> extract(const std::vector<Rec>& records, EventKind kind,
                                    int threads, Timestamp Rec::* start_field,
                                    Timestamp Rec::* end_field) {
  std::map<PoiId, std::vector<Iv>> by_poi;
  for (const auto& r : records) {
    by_poi[r.poi].push_back(Iv{&r.user, r.*start_field, r.*end_field});
  }

  std::vector<std::pair<const PoiId*, std::vector<Iv>*>> groups;
  groups.reserve(by_poi.size());
  for (auto& [poi, ivs] : by_poi) groups.emplace_back(&poi, &ivs);

  std::vector<std::vector<ProximityEvent>> partial(groups.size());
  parallel_for(groups.size(), threads, [&](std::size_t g) {
    sweep_poi(*groups[g].first, *groups[g].second, kind, partial[g]);
  });

  std::vector<ProximityEvent> out;
  std::size_t total = 0;
  for (const auto& p : partial) total += p.size();
  out.reserve(total);
  for (auto& p : partial) {
    out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  }
  std::sort(out.begin(), out.end(), [](const ProximityEvent& a, const ProximityEvent& b) {
    return std::tie(a.poi, a.start, a.user_a, a.user_b, a.end) <
           std::tie(b.poi, b.start, b.user_a, b.user_b, b.end);
  });
  return out;
}

}  // namespace

std::vector<ProximityEvent> extract_encounters(const std::vector<VisitRecord>& visits,
                                               int threads) {
  return extract(visits, EventKind::encounter, threads, &VisitRecord::arrival,
                 &VisitRecord::departure);
}

std::vector<ProximityEvent> extract_colocations(const std::vector<PresenceInterval>& presence,
                                                int threads) {
  return extract(presence, EventKind::colocation, threads, &PresenceInterval::start,
                 &PresenceInterval::end);
}

}  // namespace enco
