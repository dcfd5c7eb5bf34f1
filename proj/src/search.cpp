#include "kxchain/search.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace kxchain {

SearchLimits SearchLimits::from_environment() {
  SearchLimits limits;
  if (const char* env = std::getenv("KXCHAIN_EXACT_LIMIT")) {
    std::size_t value = 0;
    auto [end, ec] = std::from_chars(env, env + std::strlen(env), value);
    if (ec == std::errc() && *end == '\0' && value > 0) limits.max_search_nodes = value;
  }
  return limits;
}

namespace {

struct FilterPolicy {
  const std::function<bool(NodeId)>* filter;

  bool allowed(NodeId v) const { return (*filter)(v); }
  bool can_append(NodeId) const { return true; }
  void push(NodeId) {}
  void pop() {}
  bool feasible() const { return true; }
};

}  // namespace

Path longest_path_from(const ViewGraph& view, NodeId start, const std::function<bool(NodeId)>& allowed,
                       const SearchLimits& limits, std::size_t target) {
  FilterPolicy policy{&allowed};
  return search_longest(view, start, policy, limits, target);
}

Path longest_internal_path_from(const ViewGraph& view, NodeId start, const SearchLimits& limits,
                                std::span<const NodeId> forbidden, std::size_t target) {
  if (!view.contains(start)) return {};
  std::vector<char> blocked(view.node_count(), 0);
  for (NodeId v : forbidden) blocked[static_cast<std::size_t>(v)] = 1;
  if (blocked[static_cast<std::size_t>(start)]) return {};
  const HospitalId h = view.owner(start);
  std::function<bool(NodeId)> allowed = [&](NodeId v) {
    return view.owner(v) == h && !blocked[static_cast<std::size_t>(v)];
  };
  return longest_path_from(view, start, allowed, limits, target);
}

}  // namespace kxchain
