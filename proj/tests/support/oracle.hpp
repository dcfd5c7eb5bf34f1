#pragma once

// Naive reference implementations used only by the tests. Everything here
// enumerates explicitly; nothing reuses the library's search or packing code.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "kxchain/graph.hpp"

namespace oracle {

using kxchain::HospitalId;
using kxchain::NodeId;
using kxchain::Path;
using kxchain::ViewGraph;

/// Every simple path from `start` whose nodes all satisfy `keep`.
std::vector<Path> all_paths_from(const ViewGraph& view, NodeId start,
                                 const std::function<bool(NodeId)>& keep = [](NodeId) { return true; });

/// Longest path (ties lexicographic) among those accepted; empty when none.
Path best_of(const std::vector<Path>& paths, const std::function<bool(const Path&)>& accept);

Path opt(const ViewGraph& view);
Path sopt(const ViewGraph& view, std::size_t s);
Path avgopt(const ViewGraph& view, std::size_t s);
Path pi_ir(const ViewGraph& view);

/// Every simple h-internal path of at least `min_len` nodes, any start.
std::vector<Path> internal_paths(const ViewGraph& view, HospitalId h, std::size_t min_len);

/// m -> best total over families of exactly m disjoint internal paths of at
/// least `min_len` nodes; with an anchor, one path starts there.
std::map<std::size_t, std::size_t> packing_profile(const ViewGraph& view, HospitalId h, std::size_t min_len,
                                                   std::optional<NodeId> anchor = {});

/// Best utility reachable by diverting `path` at one of h's nodes.
std::size_t best_diversion_utility(const Path& path, HospitalId h, const ViewGraph& full);

/// Adjacent items differ, cyclically.
bool cyclic_ok(const std::vector<int>& colors, const std::vector<std::size_t>& order);

}  // namespace oracle
