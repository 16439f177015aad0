#pragma once

#include <cstdint>
#include <string>

namespace enco {

// Epoch seconds, UTC. All calendar math goes through Timezone (timezone.hpp).
using Timestamp = std::int64_t;
using Seconds = std::int64_t;

// Opaque identifiers as read from input: device/subscriber MACs or IDs for
// users, AP MAC or cell tower ID for PoIs. Identity comparison only.
using UserId = std::string;
using PoiId = std::string;
using PeerId = std::string;

// A user's dwell at a PoI from the WiFi pipeline, [arrival, departure].
struct VisitRecord {
  UserId user;
  PoiId poi;
  Timestamp arrival = 0;
  Timestamp departure = 0;

  friend bool operator==(const VisitRecord&, const VisitRecord&) = default;
};

// A user's assumed presence window at a cell from the CDR pipeline.
struct PresenceInterval {
  UserId user;
  PoiId poi;
  Timestamp start = 0;
  Timestamp end = 0;

  friend bool operator==(const PresenceInterval&, const PresenceInterval&) = default;
};

enum class EventKind { encounter, colocation };

const char* to_string(EventKind kind);
EventKind event_kind_from_string(const std::string& s);

// A pairwise encounter (same AP) or colocation (same cell) with strictly
// positive duration. Canonical form has user_a < user_b lexicographically.
struct ProximityEvent {
  EventKind kind = EventKind::encounter;
  UserId user_a;
  UserId user_b;
  PoiId poi;
  Timestamp start = 0;
  Timestamp end = 0;

  friend bool operator==(const ProximityEvent&, const ProximityEvent&) = default;
};

// Orders the user pair lexicographically; other fields pass through.
// Throws std::invalid_argument on a reflexive event (user_a == user_b).
ProximityEvent canonicalize(ProximityEvent e);

// (φ, ι): day of week with Monday=1..Sunday=7, and day time slot ι=⌊hour/H⌋.
struct TemporalContext {
  int phi = 1;
  int iota = 0;

  friend bool operator==(const TemporalContext&, const TemporalContext&) = default;
};

}  // namespace enco
