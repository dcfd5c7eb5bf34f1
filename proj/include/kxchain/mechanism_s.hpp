#pragma once

// Long-segments mechanism: equal-length internal path sets per hospital,
// an alternating order starting with the altruist's path, and stitching with
// a window of s''.

#include <cstddef>
#include <map>
#include <optional>

#include "kxchain/graph.hpp"
#include "kxchain/outcome.hpp"
#include "kxchain/params.hpp"
#include "kxchain/search.hpp"

namespace kxchain {

/// Maximum number of disjoint h-internal paths of exactly `length` nodes; with
/// an anchor one of them starts there (PreconditionViolated if impossible).
PathSet max_count_exact_length_paths(const ViewGraph& view, HospitalId h, std::size_t length,
                                     std::optional<NodeId> anchor, const SearchLimits& limits = {});

/// Hospital with the largest count, ties by smallest id.
HospitalId select_special(const std::map<HospitalId, std::size_t>& counts);

/// Disjoint j-internal paths, each at least `min_length` nodes, count within
/// [lower, upper], maximum total length (then fewest paths). With an anchor
/// one path starts there. PreconditionViolated when no such set exists.
PathSet redefine_special_paths(const ViewGraph& view, HospitalId j, std::size_t lower, std::size_t upper,
                               std::size_t min_length, std::optional<NodeId> anchor, const SearchLimits& limits = {});

MechanismOutcome run_mechanism_s(const ViewGraph& view, std::size_t s, const MechanismConfig& config = {});

}  // namespace kxchain
