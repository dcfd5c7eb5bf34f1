#pragma once

// Exact packing of vertex-disjoint internal paths inside one hospital.
//
// The internal subgraph is split into weakly connected components. Components
// that are plain directed chains are solved in closed form; any other
// component goes through a subset DP (Hamiltonian-path starts per subset, then
// partitions into traceable subsets) and must not exceed
// SearchLimits::max_packing_component nodes. Component profiles are combined
// by (max, +) convolution.

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "kxchain/graph.hpp"
#include "kxchain/search.hpp"

namespace kxchain {

class PackingProfile {
 public:
  /// Paths are internal to `hospital` within `view`, each has at least
  /// `min_length` nodes; with an anchor, one path must start at it.
  PackingProfile(const ViewGraph& view, HospitalId hospital, std::size_t min_length, std::optional<NodeId> anchor,
                 const SearchLimits& limits);
  ~PackingProfile();
  PackingProfile(PackingProfile&&) noexcept;
  PackingProfile& operator=(PackingProfile&&) noexcept;

  /// Largest m for which some packing of exactly m paths exists (0 if only the
  /// empty packing exists). nullopt when nothing is feasible at all, which
  /// only happens with an anchor that starts no long-enough path.
  std::optional<std::size_t> max_count() const;
  /// Maximum total node count over packings of exactly m paths.
  std::optional<std::size_t> best_total(std::size_t m) const;
  /// An optimal packing of exactly m paths, sorted lexicographically.
  /// Throws PreconditionViolated when m is infeasible.
  PathSet witness(std::size_t m) const;

  HospitalId hospital() const { return hospital_; }

  struct Component;

 private:
  HospitalId hospital_;
  std::vector<std::unique_ptr<Component>> components_;
  std::vector<long> combined_;                   // combined_[m], -1 when infeasible
  std::vector<std::vector<std::size_t>> choice_;  // choice_[c][m] = paths taken from component c
};

/// Nodes of the weakly connected components of hospital h's internal subgraph,
/// each listed ascending; components ordered by smallest node.
std::vector<std::vector<NodeId>> internal_components(const ViewGraph& view, HospitalId h);

}  // namespace kxchain
