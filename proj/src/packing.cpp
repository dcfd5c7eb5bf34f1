#include "kxchain/packing.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <string>

#include "kxchain/errors.hpp"

namespace kxchain {

std::vector<std::vector<NodeId>> internal_components(const ViewGraph& view, HospitalId h) {
  const auto members = view.members(h);
  std::vector<NodeId> parent(view.node_count(), -1);
  auto find = [&](NodeId v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      auto& p = parent[static_cast<std::size_t>(v)];
      p = parent[static_cast<std::size_t>(p)];
      v = p;
    }
    return v;
  };
  for (NodeId v : members) parent[static_cast<std::size_t>(v)] = v;
  for (NodeId v : members) {
    for (NodeId w : view.successors(v)) {
      if (view.owner(w) != h) continue;
      NodeId a = find(v);
      NodeId b = find(w);
      if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
  }
  std::vector<std::vector<NodeId>> out;
  std::vector<long> slot(view.node_count(), -1);
  for (NodeId v : members) {
    const NodeId root = find(v);
    auto& idx = slot[static_cast<std::size_t>(root)];
    if (idx < 0) {
      idx = static_cast<long>(out.size());
      out.emplace_back();
    }
    out[static_cast<std::size_t>(idx)].push_back(v);
  }
  return out;
}

struct PackingProfile::Component {
  virtual ~Component() = default;
  std::vector<long> profile;  // profile[m], -1 when infeasible
  virtual std::vector<Path> witness(std::size_t m) const = 0;
};

namespace {

// A component whose internal edges form one directed path c[0] -> ... -> c[N-1].
struct ChainComponent final : PackingProfile::Component {
  std::vector<NodeId> chain;
  std::size_t min_length;
  std::size_t anchor_pos;  // chain.size() when there is no anchor

  ChainComponent(std::vector<NodeId> c, std::size_t len, std::optional<std::size_t> anchor)
      : chain(std::move(c)), min_length(len), anchor_pos(anchor.value_or(chain.size())) {
    const std::size_t prefix = anchor ? anchor_pos : chain.size();
    const std::size_t suffix = chain.size() - prefix;
    const std::size_t max_prefix = prefix / min_length;
    const std::size_t max_suffix = suffix / min_length;
    if (!anchor) {
      profile.assign(max_prefix + 1, static_cast<long>(prefix));
      profile[0] = 0;
      return;
    }
    profile.assign(max_prefix + max_suffix + 1, -1);
    for (std::size_t ms = 1; ms <= max_suffix; ++ms) {
      for (std::size_t mp = 0; mp <= max_prefix; ++mp) {
        const long total = static_cast<long>(suffix + (mp > 0 ? prefix : 0));
        profile[mp + ms] = std::max(profile[mp + ms], total);
      }
    }
  }

  // Cuts [begin, end) into m pieces: m-1 of minimal length, the last takes the rest.
  void cut(std::size_t begin, std::size_t end, std::size_t m, std::vector<Path>& out) const {
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t from = begin + i * min_length;
      const std::size_t to = (i + 1 == m) ? end : from + min_length;
      out.push_back(Path{std::vector<NodeId>(chain.begin() + static_cast<long>(from),
                                             chain.begin() + static_cast<long>(to))});
    }
  }

  std::vector<Path> witness(std::size_t m) const override {
    std::vector<Path> out;
    if (anchor_pos == chain.size()) {
      cut(0, chain.size(), m, out);
      return out;
    }
    const std::size_t prefix = anchor_pos;
    const std::size_t max_prefix = prefix / min_length;
    const std::size_t max_suffix = (chain.size() - prefix) / min_length;
    // Prefer covering the prefix (it adds nodes); keep its piece count minimal.
    std::size_t mp = 0;
    if (m >= 2 && max_prefix >= 1) mp = std::max<std::size_t>(1, m > max_suffix ? m - max_suffix : 1);
    if (mp > max_prefix || m - mp < 1 || m - mp > max_suffix) mp = 0;
    cut(0, prefix, mp, out);
    cut(prefix, chain.size(), m - mp, out);
    return out;
  }
};

// Subset DP for small components of arbitrary shape.
struct SubsetComponent final : PackingProfile::Component {
  std::vector<NodeId> nodes;
  std::vector<std::uint32_t> adj;     // local adjacency bitmasks
  std::vector<std::uint32_t> starts;  // starts[mask]: nodes starting a Hamiltonian path of mask
  std::vector<std::uint64_t> parts;   // parts[mask]: bit m set when mask splits into m valid paths
  std::vector<std::uint32_t> best_mask;
  std::size_t min_length;
  int anchor = -1;

  SubsetComponent(const ViewGraph& view, std::vector<NodeId> members, std::size_t len, std::optional<NodeId> anchor_node)
      : nodes(std::move(members)), min_length(len) {
    const std::size_t n = nodes.size();
    adj.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (anchor_node && nodes[i] == *anchor_node) anchor = static_cast<int>(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && view.has_edge(nodes[i], nodes[j])) adj[i] |= 1u << j;
      }
    }
    const std::uint32_t full = (1u << n) - 1;
    starts.assign(std::size_t{1} << n, 0);
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      if (std::has_single_bit(mask)) {
        starts[mask] = mask;
        continue;
      }
      std::uint32_t result = 0;
      for (std::uint32_t rest = mask; rest; rest &= rest - 1) {
        const std::uint32_t bit = rest & (~rest + 1);
        const int s = std::countr_zero(bit);
        if (adj[static_cast<std::size_t>(s)] & starts[mask ^ bit]) result |= bit;
      }
      starts[mask] = result;
    }
    parts.assign(std::size_t{1} << n, 0);
    parts[0] = 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      const std::uint32_t low = mask & (~mask + 1);
      const std::uint32_t rest = mask ^ low;
      std::uint32_t sub = rest;
      while (true) {
        const std::uint32_t piece = sub | low;
        if (valid_piece(piece)) parts[mask] |= parts[mask ^ piece] << 1;
        if (sub == 0) break;
        sub = (sub - 1) & rest;
      }
    }
    profile.assign(n + 1, -1);
    best_mask.assign(n + 1, 0);
    for (std::uint32_t mask = 0; mask <= full; ++mask) {
      if (anchor >= 0 && !(mask >> anchor & 1u)) continue;
      const long size = std::popcount(mask);
      for (std::uint64_t bits = parts[mask]; bits; bits &= bits - 1) {
        const auto m = static_cast<std::size_t>(std::countr_zero(bits));
        if (size > profile[m]) {
          profile[m] = size;
          best_mask[m] = mask;
        }
      }
    }
    while (!profile.empty() && profile.back() < 0) profile.pop_back();
  }

  bool valid_piece(std::uint32_t piece) const {
    if (static_cast<std::size_t>(std::popcount(piece)) < min_length) return false;
    if (anchor >= 0 && (piece >> anchor & 1u)) return (starts[piece] >> anchor & 1u) != 0;
    return starts[piece] != 0;
  }

  Path trace(std::uint32_t piece) const {
    int cur = (anchor >= 0 && (piece >> anchor & 1u)) ? anchor : std::countr_zero(starts[piece]);
    Path path;
    std::uint32_t remaining = piece;
    while (true) {
      path.nodes.push_back(nodes[static_cast<std::size_t>(cur)]);
      remaining ^= 1u << cur;
      if (!remaining) break;
      const std::uint32_t next = adj[static_cast<std::size_t>(cur)] & starts[remaining];
      cur = std::countr_zero(next);
    }
    return path;
  }

  std::vector<Path> witness(std::size_t m) const override {
    std::vector<Path> out;
    std::uint32_t mask = best_mask[m];
    while (mask) {
      const std::uint32_t low = mask & (~mask + 1);
      const std::uint32_t rest = mask ^ low;
      // Ascending submask enumeration: smallest piece value first.
      std::uint32_t sub = 0;
      bool found = false;
      while (true) {
        const std::uint32_t piece = sub | low;
        if (valid_piece(piece) && (parts[mask ^ piece] >> (m - 1) & 1u)) {
          out.push_back(trace(piece));
          mask ^= piece;
          --m;
          found = true;
          break;
        }
        if (sub == rest) break;
        sub = (sub - rest) & rest;
      }
      if (!found) throw InvariantViolation("packing witness reconstruction failed");
    }
    return out;
  }
};

std::optional<std::vector<NodeId>> as_chain(const ViewGraph& view, const std::vector<NodeId>& component) {
  const HospitalId h = view.owner(component.front());
  std::size_t edges = 0;
  NodeId head = -1;
  std::vector<NodeId> next(component.size(), -1);
  auto local = [&](NodeId v) {
    return static_cast<std::size_t>(std::lower_bound(component.begin(), component.end(), v) - component.begin());
  };
  std::vector<int> indegree(component.size(), 0);
  for (std::size_t i = 0; i < component.size(); ++i) {
    int out = 0;
    for (NodeId w : view.successors(component[i])) {
      if (view.owner(w) != h) continue;
      ++edges;
      ++out;
      next[i] = w;
      ++indegree[local(w)];
    }
    if (out > 1) return std::nullopt;
  }
  if (edges + 1 != component.size()) return std::nullopt;
  for (std::size_t i = 0; i < component.size(); ++i) {
    if (indegree[i] > 1) return std::nullopt;
    if (indegree[i] == 0) head = component[i];
  }
  std::vector<NodeId> chain;
  for (NodeId v = head; v >= 0; v = next[local(v)]) chain.push_back(v);
  return chain;
}

}  // namespace

PackingProfile::~PackingProfile() = default;
PackingProfile::PackingProfile(PackingProfile&&) noexcept = default;
PackingProfile& PackingProfile::operator=(PackingProfile&&) noexcept = default;

PackingProfile::PackingProfile(const ViewGraph& view, HospitalId hospital, std::size_t min_length,
                               std::optional<NodeId> anchor, const SearchLimits& limits)
    : hospital_(hospital) {
  if (min_length == 0) throw PreconditionViolated("packing minimum path length must be at least 1");
  if (anchor && (!view.contains(*anchor) || view.owner(*anchor) != hospital)) {
    throw PreconditionViolated("packing anchor must be a declared node of the hospital");
  }
  for (auto& component : internal_components(view, hospital)) {
    const bool anchored = anchor && std::binary_search(component.begin(), component.end(), *anchor);
    const std::optional<NodeId> local_anchor = anchored ? anchor : std::nullopt;
    if (auto chain = as_chain(view, component)) {
      std::optional<std::size_t> pos;
      if (anchored) pos = static_cast<std::size_t>(std::find(chain->begin(), chain->end(), *anchor) - chain->begin());
      components_.push_back(std::make_unique<ChainComponent>(std::move(*chain), min_length, pos));
    } else {
      if (component.size() > limits.max_packing_component || component.size() > 24) {
        throw ResourceBudgetExceeded("internal component of hospital " + std::to_string(hospital) + " has " +
                                     std::to_string(component.size()) + " nodes and is not a chain; packing limit is " +
                                     std::to_string(limits.max_packing_component));
      }
      components_.push_back(std::make_unique<SubsetComponent>(view, std::move(component), min_length, local_anchor));
    }
  }
  combined_ = {0};
  for (const auto& component : components_) {
    const auto& prof = component->profile;
    std::vector<long> next(combined_.size() + (prof.empty() ? 0 : prof.size() - 1), -1);
    std::vector<std::size_t> pick(next.size(), 0);
    for (std::size_t m = 0; m < combined_.size(); ++m) {
      if (combined_[m] < 0) continue;
      for (std::size_t mc = 0; mc < prof.size(); ++mc) {
        if (prof[mc] < 0) continue;
        const long total = combined_[m] + prof[mc];
        if (total > next[m + mc]) {
          next[m + mc] = total;
          pick[m + mc] = mc;
        }
      }
    }
    combined_ = std::move(next);
    choice_.push_back(std::move(pick));
  }
  while (!combined_.empty() && combined_.back() < 0) combined_.pop_back();
}

std::optional<std::size_t> PackingProfile::max_count() const {
  if (combined_.empty()) return std::nullopt;
  return combined_.size() - 1;
}

std::optional<std::size_t> PackingProfile::best_total(std::size_t m) const {
  if (m >= combined_.size() || combined_[m] < 0) return std::nullopt;
  return static_cast<std::size_t>(combined_[m]);
}

PathSet PackingProfile::witness(std::size_t m) const {
  if (!best_total(m)) throw PreconditionViolated("no packing with " + std::to_string(m) + " paths exists");
  PathSet out{hospital_, {}};
  std::size_t remaining = m;
  for (std::size_t c = components_.size(); c-- > 0;) {
    const std::size_t take = choice_[c][remaining];
    for (auto& path : components_[c]->witness(take)) out.paths.push_back(std::move(path));
    remaining -= take;
  }
  std::sort(out.paths.begin(), out.paths.end());
  return out;
}

}  // namespace kxchain
