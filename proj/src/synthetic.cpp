#include "enco/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

#include "enco/parallel.hpp"

namespace enco {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix(mix(mix(seed ^ mix(a)) ^ mix(b)) ^ mix(c));
}

constexpr Seconds kJitterMax = 240;
constexpr Seconds kDurationFloor = 960;   // survives the default 900 s dwell filter
constexpr Seconds kSlotEndMargin = 400;   // keeps meetings clear of the next slot

struct Meeting {
  int user_lo = 0;
  int user_hi = 0;
  int poi = 0;
  Timestamp start = 0;
  Timestamp end = 0;
  int phi = 1;
  int iota = 0;
  bool noisy = false;
};

}  // namespace

void ScheduleSpec::validate() const {
  if (n_users < 2) throw std::invalid_argument("schedule: need at least 2 users");
  if (n_pois < 1) throw std::invalid_argument("schedule: need at least 1 poi");
  if (n_weeks < 1) throw std::invalid_argument("schedule: need at least 1 week");
  if (noise_rate < 0.0 || noise_rate > 1.0) {
    throw std::invalid_argument("schedule: noise_rate must be in [0,1]");
  }
  int pairs = n_users / 2;
  if (slots.size() != static_cast<std::size_t>(pairs) * static_cast<std::size_t>(slots_per_pair)) {
    throw std::invalid_argument("schedule: slots must hold slots_per_pair entries per pair");
  }
  for (int p = 0; p < pairs; ++p) {
    std::set<std::pair<int, int>> contexts;
    for (int j = 0; j < slots_per_pair; ++j) {
      const SlotSpec& s = slots[static_cast<std::size_t>(p * slots_per_pair + j)];
      if (s.phi < 1 || s.phi > 7) throw std::invalid_argument("schedule: phi out of range");
      if (s.iota < 0) throw std::invalid_argument("schedule: iota out of range");
      if (s.poi < 0 || s.poi >= n_pois) throw std::invalid_argument("schedule: poi out of range");
      if (s.median_duration_s <= 0) throw std::invalid_argument("schedule: bad duration");
      if (!contexts.insert({s.phi, s.iota}).second) {
        throw std::invalid_argument("schedule: pair double-booked in one slot");
      }
    }
  }
}

ScheduleSpec weekly_plan(int n_users, int n_pois, int n_weeks, int slots_per_pair,
                         double noise_rate, bool weekend_conflict, std::uint64_t seed) {
  ScheduleSpec spec;
  spec.n_users = n_users;
  spec.n_pois = n_pois;
  spec.n_weeks = n_weeks;
  spec.noise_rate = noise_rate;
  spec.weekend_conflict = weekend_conflict;
  spec.seed = seed;
  int pairs = n_users / 2;

  std::set<std::tuple<int, int, int>> used;  // (phi, iota, poi)
  auto claim_poi = [&](int phi, int iota, int base_poi) {
    for (int t = 0; t < n_pois; ++t) {
      int poi = (base_poi + t) % n_pois;
      if (used.insert({phi, iota, poi}).second) return poi;
    }
    throw std::invalid_argument("weekly_plan: more pairs than PoIs for a context");
  };

  if (weekend_conflict) {
    // Each pair keeps two daily slots: in ι1 it meets Mondays at one PoI and
    // Saturdays at another (the same slot, a different weekend place), and
    // likewise in ι2 on Tuesdays vs Sundays. The PoI depends on (φ, ι)
    // jointly, priors stay balanced, and each class owns one (φ, ι) cell.
    spec.slots_per_pair = 4;
    for (int p = 0; p < pairs; ++p) {
      for (int which = 0; which < 2; ++which) {
        int iota = (2 * p + which) % 12;
        int weekday_poi = (4 * p + 2 * which) % n_pois;
        int weekend_poi = (4 * p + 2 * which + 1) % n_pois;
        for (int phi : {1 + which, 6 + which}) {
          SlotSpec s;
          s.phi = phi;
          s.iota = iota;
          s.poi = claim_poi(phi, iota, phi <= 5 ? weekday_poi : weekend_poi);
          s.median_duration_s = 3600;
          spec.slots.push_back(s);
        }
      }
    }
  } else {
    // Each pair gets its own run of (φ, ι) contexts; PoIs are deduplicated
    // per context so no two pairs ever share (φ, ι, PoI).
    spec.slots_per_pair = slots_per_pair;
    for (int p = 0; p < pairs; ++p) {
      for (int j = 0; j < slots_per_pair; ++j) {
        int q = p * slots_per_pair + j;
        int context = q % 84;
        SlotSpec s;
        s.phi = 1 + context / 12;
        s.iota = context % 12;
        s.poi = claim_poi(s.phi, s.iota, (p + j) % n_pois);
        s.median_duration_s = 2400 + 400 * (j % 4);
        spec.slots.push_back(s);
      }
    }
  }
  spec.validate();
  return spec;
}

std::string synthetic_user_id(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "u%05d", index);
  return buf;
}

std::string synthetic_poi_id(int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "p%04d", index);
  return buf;
}

SyntheticTrace generate(const ScheduleSpec& spec, const Timezone& tz, int slot_hours,
                        int threads) {
  spec.validate();
  int slot_count = slots_per_day(slot_hours);
  for (const SlotSpec& s : spec.slots) {
    if (s.iota >= slot_count) throw std::invalid_argument("schedule: iota out of range for H");
  }

  const Seconds slot_len = static_cast<Seconds>(slot_hours) * 3600;
  const Seconds duration_cap = slot_len - kSlotEndMargin;
  if (duration_cap <= kDurationFloor) {
    throw std::invalid_argument("generate: slot too short for meeting durations");
  }

  int pairs = spec.n_users / 2;
  std::size_t meetings_per_week = static_cast<std::size_t>(pairs) *
                                  static_cast<std::size_t>(spec.slots_per_pair);
  std::vector<Meeting> meetings(static_cast<std::size_t>(spec.n_weeks) * meetings_per_week);

  parallel_for(meetings.size(), threads, [&](std::size_t m) {
    std::size_t w = m / meetings_per_week;
    std::size_t r = m % meetings_per_week;
    int p = static_cast<int>(r) / spec.slots_per_pair;
    int j = static_cast<int>(r) % spec.slots_per_pair;
    const SlotSpec& slot = spec.slots[static_cast<std::size_t>(p * spec.slots_per_pair + j)];

    std::mt19937_64 rng(derive_seed(spec.seed, w, static_cast<std::uint64_t>(p),
                                    static_cast<std::uint64_t>(j)));
    std::uniform_int_distribution<Seconds> jitter(0, kJitterMax);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::bernoulli_distribution noisy(spec.noise_rate);

    // epoch_start must be Monday 00:00 in tz; wall-clock offsets within the
    // week then advance 1:1 with UTC for a fixed-offset zone.
    Timestamp start = spec.epoch_start + static_cast<Timestamp>(w) * 7 * 86400 +
                      static_cast<Timestamp>(slot.phi - 1) * 86400 +
                      static_cast<Timestamp>(slot.iota) * slot_len + jitter(rng);
    double sampled = static_cast<double>(slot.median_duration_s) *
                     std::exp(spec.sigma_log * gauss(rng));
    Seconds duration = std::clamp<Seconds>(std::llround(sampled), kDurationFloor, duration_cap);

    Meeting& mt = meetings[m];
    mt.user_lo = 2 * p;
    mt.user_hi = 2 * p + 1;
    mt.poi = slot.poi;
    mt.start = start;
    mt.end = start + duration;
    mt.phi = slot.phi;
    mt.iota = slot.iota;
    mt.noisy = noisy(rng);
  });

  // Noise pass: pool the noised meetings of each (week, φ, ι), re-pair the
  // pooled members and redraw each new pair's PoI uniformly.
  if (spec.noise_rate > 0) {
    std::map<std::tuple<std::size_t, int, int>, std::vector<std::size_t>> pools;
    for (std::size_t m = 0; m < meetings.size(); ++m) {
      if (!meetings[m].noisy) continue;
      std::size_t w = m / meetings_per_week;
      pools[{w, meetings[m].phi, meetings[m].iota}].push_back(m);
    }
    for (const auto& [key, pool] : pools) {
      const auto& [w, phi, iota] = key;
      std::mt19937_64 rng(derive_seed(spec.seed ^ 0xABCDEF0123456789ULL, w,
                                      static_cast<std::uint64_t>(phi),
                                      static_cast<std::uint64_t>(iota)));
      std::vector<int> members;
      for (std::size_t m : pool) {
        members.push_back(meetings[m].user_lo);
        members.push_back(meetings[m].user_hi);
      }
      std::shuffle(members.begin(), members.end(), rng);
      std::uniform_int_distribution<int> any_poi(0, spec.n_pois - 1);
      for (std::size_t i = 0; i < pool.size(); ++i) {
        Meeting& mt = meetings[pool[i]];
        int a = members[2 * i];
        int b = members[2 * i + 1];
        mt.user_lo = std::min(a, b);
        mt.user_hi = std::max(a, b);
        mt.poi = any_poi(rng);
      }
    }
  }

  SyntheticTrace trace;
  trace.visits.reserve(meetings.size() * 2);
  trace.truth.reserve(meetings.size() * 2);
  DurationBins bins;
  for (const Meeting& mt : meetings) {
    UserId lo = synthetic_user_id(mt.user_lo);
    UserId hi = synthetic_user_id(mt.user_hi);
    PoiId poi = synthetic_poi_id(mt.poi);
    trace.visits.push_back({lo, poi, mt.start, mt.end});
    trace.visits.push_back({hi, poi, mt.start, mt.end});

    ProximityEvent e;
    e.kind = EventKind::encounter;
    e.user_a = lo;
    e.user_b = hi;
    e.poi = poi;
    e.start = mt.start;
    e.end = mt.end;
    auto [ra, rb] = featurize_event(e, slot_hours, tz, bins);
    trace.truth.push_back(std::move(ra));
    trace.truth.push_back(std::move(rb));
  }

  std::sort(trace.visits.begin(), trace.visits.end(), [](const auto& a, const auto& b) {
    return std::tie(a.user, a.arrival, a.poi) < std::tie(b.user, b.arrival, b.poi);
  });
  std::sort(trace.truth.begin(), trace.truth.end(), [](const auto& a, const auto& b) {
    return std::tie(a.user, a.phi, a.iota_s, a.poi, a.peer) <
           std::tie(b.user, b.phi, b.iota_s, b.poi, b.peer);
  });
  return trace;
}

std::vector<WifiSessionRecord> to_wifi_sessions(const std::vector<VisitRecord>& visits) {
  std::vector<WifiSessionRecord> sessions;
  sessions.reserve(visits.size() * 2);
  for (const auto& v : visits) {
    sessions.push_back({v.arrival, v.poi, v.user, 0, SessionStatus::start});
    sessions.push_back({v.departure, v.poi, v.user, v.departure - v.arrival, SessionStatus::stop});
  }
  return sessions;
}

}  // namespace enco
