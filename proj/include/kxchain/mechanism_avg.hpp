#pragma once

// High-averages mechanism: activity by average internal path length, capped
// path counts, normalized path sets, a bounded graph search from the
// altruist, and the two stitching subprocedures.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kxchain/graph.hpp"
#include "kxchain/outcome.hpp"
#include "kxchain/params.hpp"
#include "kxchain/search.hpp"

namespace kxchain {

/// f_value times the largest m such that some m disjoint h-internal paths
/// have mean length at least s.
std::size_t count_paths(const ViewGraph& view, HospitalId h, std::size_t s, std::size_t f_value,
                        const SearchLimits& limits = {});

/// Caps the largest count (ties by id) at the sum of the others.
std::map<HospitalId, std::size_t> cap_special(const std::map<HospitalId, std::size_t>& counts);

/// At most `cap` disjoint h-internal paths of maximum total length, fewest paths on ties.
PathSet select_paths_max_total(const ViewGraph& view, HospitalId h, std::size_t cap, const SearchLimits& limits = {});

struct NormalizeResult {
  std::vector<PathSet> sets;
  bool degenerate = false;
  std::string reason;
};

/// Drops paths shorter than 4 s', then splits 4 s'-node suffixes off the
/// longest path (ties: lexicographically smallest) until hospital i has
/// counts[i] paths. Degenerate when a split would leave a piece under 4 s'.
NormalizeResult normalize_pathsets(std::vector<PathSet> sets, const std::vector<std::size_t>& counts,
                                   std::size_t s_prime);

/// Path ids: hospitals ascending, then position within the set.
struct PathRef {
  std::size_t hospital = 0;
  std::size_t index = 0;
};

struct SearchResult {
  enum class Kind { kFound, kSaturated, kExhausted };
  Kind kind = Kind::kExhausted;
  std::vector<NodeId> explored;
  std::vector<NodeId> parent;  // indexed by node, -1 when unset
  std::vector<std::size_t> exp_sizes;
  // kFound only
  NodeId nu = -1;
  PathRef on;
  Path suffix;
};

/// The bounded exploration from the altruist. `sets` loses every suffix the
/// search consumes.
SearchResult graph_search(const ViewGraph& view, std::vector<PathSet>& sets, const std::vector<bool>& active,
                          std::size_t s_prime);

/// Path from the altruist to v along the parent links.
Path explored_path(const SearchResult& search, NodeId v);

struct Witness {
  NodeId v = -1;
  PathRef on;
  std::size_t head_pos = 0;
};

/// Smallest explored v with an edge into the first s' nodes of some path,
/// then the smallest path id, then the earliest head position.
std::optional<Witness> find_witness(const ViewGraph& view, const SearchResult& search,
                                    const std::vector<PathSet>& sets, std::size_t s_prime);

struct StitchAttempt {
  std::optional<Path> path;
  std::vector<StitchLink> links;
};

StitchAttempt stitch1(const ViewGraph& view, const SearchResult& search, const std::vector<PathSet>& sets,
                      std::size_t s_prime, Trace* trace = nullptr);

StitchAttempt stitch2(const ViewGraph& view, const SearchResult& search, const Witness& witness,
                      const std::vector<PathSet>& sets, std::size_t s_prime, Trace* trace = nullptr);

MechanismOutcome run_mechanism_avg(const ViewGraph& view, std::size_t s, const MechanismConfig& config = {});

/// Per hospital, nodes of the max-total path sets missing from `path`.
std::vector<std::size_t> pathset_loss(const AvgRunDetails& details, const Path& path);

}  // namespace kxchain
