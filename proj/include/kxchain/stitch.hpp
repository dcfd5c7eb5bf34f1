#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kxchain/graph.hpp"

namespace kxchain {

struct StitchEntry {
  HospitalId owner = 0;
  Path path;
};

/// Hospital-alternating sequence of disjoint paths to be joined in order.
struct StitchPlan {
  std::vector<StitchEntry> sequence;
  std::size_t window = 1;

  /// Throws PreconditionViolated: empty paths, equal adjacent owners, a zero
  /// window, or an interior entry shorter than 2 * window.
  void validate() const;
};

struct StitchLink {
  NodeId tail = 0;
  NodeId head = 0;
  std::size_t tail_pos = 0;  // index in the tail path
  std::size_t head_pos = 0;  // index in the head path
};

struct StitchResult {
  std::optional<Path> path;
  std::vector<StitchLink> links;
  /// Index t of the first pair (t, t+1) without a stitch edge.
  std::optional<std::size_t> failed_at;
};

/// Joins consecutive entries through an edge from the last `window` nodes of
/// path t (after any head cut from the previous stitch) into the first
/// `window` nodes of path t+1. Among candidate edges the one keeping the most
/// nodes wins, ties by (tail id, head id).
StitchResult stitch(const StitchPlan& plan, const ViewGraph& view);

}  // namespace kxchain
