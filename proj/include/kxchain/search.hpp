#pragma once

// Exact longest-simple-path search: depth-first, successors ascending, pruned
// by reachability. The first longest path found is the lexicographically
// smallest one.

#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "kxchain/errors.hpp"
#include "kxchain/graph.hpp"

namespace kxchain {

struct SearchLimits {
  /// Largest branching region (nodes reachable from the start) the exhaustive
  /// path search accepts. Regions without branching are linear and exempt.
  std::size_t max_search_nodes = 24;
  /// Largest non-chain internal component handed to the subset-DP packer.
  std::size_t max_packing_component = 16;

  /// Defaults, with max_search_nodes overridden by KXCHAIN_EXACT_LIMIT when set.
  static SearchLimits from_environment();
};

inline constexpr std::size_t kNoTarget = std::numeric_limits<std::size_t>::max();

namespace detail {

/// Throws ResourceBudgetExceeded when the allowed region reachable from
/// `start` is larger than the limit and contains a branching node.
template <class Allowed>
void check_region(const ViewGraph& view, NodeId start, const Allowed& allowed, const SearchLimits& limits) {
  std::vector<char> seen(view.node_count(), 0);
  std::vector<NodeId> queue{start};
  seen[static_cast<std::size_t>(start)] = 1;
  bool branching = false;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::size_t out = 0;
    for (NodeId w : view.successors(queue[head])) {
      if (!allowed(w)) continue;
      ++out;
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        queue.push_back(w);
      }
    }
    if (out > 1) branching = true;
  }
  if (branching && queue.size() > limits.max_search_nodes) {
    throw ResourceBudgetExceeded("exact path search region has " + std::to_string(queue.size()) +
                                 " nodes, limit is " + std::to_string(limits.max_search_nodes));
  }
}

}  // namespace detail

/// Runs the exhaustive search. `Policy` supplies:
///   bool allowed(NodeId) const     static node filter
///   bool can_append(NodeId) const  dynamic filter for extending the current path
///   void push(NodeId), void pop()  state maintenance
///   bool feasible() const          whether the current path is a candidate
/// Returns the lexicographically smallest longest feasible path, or an empty
/// path when no prefix is feasible. Stops early once a feasible path of
/// `target` nodes is found.
template <class Policy>
Path search_longest(const ViewGraph& view, NodeId start, Policy& policy, const SearchLimits& limits,
                    std::size_t target = kNoTarget) {
  Path best;
  if (!view.contains(start) || !policy.allowed(start)) return best;
  auto allowed = [&](NodeId v) { return view.contains(v) && policy.allowed(v); };
  detail::check_region(view, start, allowed, limits);

  const std::size_t n = view.node_count();
  std::vector<char> used(n, 0);
  std::vector<NodeId> path;
  std::vector<std::size_t> cursor;
  std::vector<char> mark(n, 0);
  std::vector<NodeId> queue;

  auto reach_from = [&](NodeId w) {
    queue.clear();
    queue.push_back(w);
    mark[static_cast<std::size_t>(w)] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (NodeId x : view.successors(queue[head])) {
        auto xi = static_cast<std::size_t>(x);
        if (!used[xi] && !mark[xi] && allowed(x)) {
          mark[xi] = 1;
          queue.push_back(x);
        }
      }
    }
    for (NodeId x : queue) mark[static_cast<std::size_t>(x)] = 0;
    return queue.size();
  };

  auto enter = [&](NodeId v) {
    used[static_cast<std::size_t>(v)] = 1;
    path.push_back(v);
    cursor.push_back(0);
    policy.push(v);
    if (policy.feasible() && path.size() > best.length()) best.nodes = path;
  };

  enter(start);
  while (!path.empty()) {
    if (best.length() >= target) break;
    const NodeId tip = path.back();
    auto succ = view.successors(tip);
    std::size_t& i = cursor.back();
    bool descended = false;
    while (i < succ.size()) {
      const NodeId w = succ[i++];
      if (used[static_cast<std::size_t>(w)] || !allowed(w) || !policy.can_append(w)) continue;
      if (path.size() + reach_from(w) <= best.length()) continue;
      enter(w);
      descended = true;
      break;
    }
    if (!descended) {
      policy.pop();
      used[static_cast<std::size_t>(path.back())] = 0;
      path.pop_back();
      cursor.pop_back();
    }
  }
  return best;
}

/// Longest simple path from `start` through nodes accepted by `allowed`.
Path longest_path_from(const ViewGraph& view, NodeId start, const std::function<bool(NodeId)>& allowed,
                       const SearchLimits& limits, std::size_t target = kNoTarget);

/// Longest path from `start` inside the owner's internal subgraph, avoiding `forbidden`.
Path longest_internal_path_from(const ViewGraph& view, NodeId start, const SearchLimits& limits,
                                std::span<const NodeId> forbidden = {}, std::size_t target = kNoTarget);

}  // namespace kxchain
