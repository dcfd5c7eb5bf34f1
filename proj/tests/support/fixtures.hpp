#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kxchain/graph.hpp"

namespace fixtures {

using namespace kxchain;

inline std::shared_ptr<const Instance> make(std::vector<HospitalId> owners, std::vector<Edge> edges, NodeId alpha = 0,
                                            const std::string& p = "0") {
  const std::size_t n = owners.size();
  return std::make_shared<const Instance>(n, std::move(owners), std::move(edges), alpha, Probability::parse(p));
}

/// Appends a chain of `len` nodes owned by h; returns its node ids.
inline std::vector<NodeId> chain(std::vector<HospitalId>& owners, std::vector<Edge>& edges, HospitalId h,
                                 std::size_t len) {
  std::vector<NodeId> ids;
  for (std::size_t i = 0; i < len; ++i) {
    ids.push_back(static_cast<NodeId>(owners.size()));
    owners.push_back(h);
    if (i > 0) edges.push_back({ids[i - 1], ids[i]});
  }
  return ids;
}

inline Path P(std::vector<NodeId> nodes) { return Path{std::move(nodes)}; }

}  // namespace fixtures
