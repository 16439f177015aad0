#pragma once

#include <vector>

#include "enco/types.hpp"

namespace enco {

// Pairwise interval-overlap extraction: for any two distinct users whose
// intervals at the same PoI overlap with strictly positive length, one event
// (min user, max user, poi, max of starts, min of ends) is emitted. Disjoint
// overlaps of the same pair yield separate events. Output is sorted by
// (poi, start, user_a, user_b, end).
//
// Sweep-line per PoI: O(n log n + k). Inputs must be per-(user, poi) disjoint,
// which ingestion guarantees. threads > 1 parallelizes across PoIs; the final
// sort keeps the output deterministic either way.
std::vector<ProximityEvent> extract_encounters(const std::vector<VisitRecord>& visits,
                                               int threads = 1);
std::vector<ProximityEvent> extract_colocations(const std::vector<PresenceInterval>& presence,
                                                int threads = 1);

}  // namespace enco
