#include "enco/types.hpp"

#include <stdexcept>
#include <utility>

namespace enco {

const char* to_string(EventKind kind) {
  return kind == EventKind::encounter ? "encounter" : "colocation";
}

EventKind event_kind_from_string(const std::string& s) {
  if (s == "encounter") return EventKind::encounter;
  if (s == "colocation") return EventKind::colocation;
  throw std::invalid_argument("unknown event kind: " + s);
}

ProximityEvent canonicalize(ProximityEvent e) {
  if (e.user_a == e.user_b) {
    throw std::invalid_argument("reflexive event: user_a == user_b (" + e.user_a + ")");
  }
  if (e.user_b < e.user_a) {
    std::swap(e.user_a, e.user_b);
  }
  return e;
}

}  // namespace enco
