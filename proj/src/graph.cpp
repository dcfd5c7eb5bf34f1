#include "kxchain/graph.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <unordered_set>

#include "kxchain/errors.hpp"

namespace kxchain {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

Probability Probability::parse(std::string_view text) {
  if (text.empty()) throw InvalidInstance("edge probability: empty string");
  for (char c : text) {
    if (!((c >= '0' && c <= '9') || c == '.')) {
      throw InvalidInstance("edge probability must be a plain decimal string, got '" + std::string(text) + "'");
    }
  }
  double value = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw InvalidInstance("edge probability: cannot parse '" + std::string(text) + "'");
  }
  if (value < 0.0 || value > 1.0) {
    throw InvalidInstance("edge probability outside [0, 1]: '" + std::string(text) + "'");
  }
  Probability p;
  p.text_ = std::string(text);
  p.value_ = value;
  return p;
}

std::size_t PathSet::total_length() const {
  std::size_t total = 0;
  for (const auto& path : paths) total += path.length();
  return total;
}

Instance::Instance(std::size_t node_count, std::vector<HospitalId> owners, std::vector<Edge> base_edges,
                   NodeId altruist, Probability p)
    : owners_(std::move(owners)), base_edges_(std::move(base_edges)), altruist_(altruist), p_(std::move(p)) {
  if (node_count == 0) throw InvalidInstance("instance needs at least one node");
  if (owners_.size() != node_count) {
    throw InvalidInstance("owners has " + std::to_string(owners_.size()) + " entries, expected " +
                          std::to_string(node_count));
  }
  HospitalId max_owner = 0;
  for (HospitalId h : owners_) {
    if (h < 0) throw InvalidInstance("negative hospital id");
    max_owner = std::max(max_owner, h);
  }
  members_.assign(static_cast<std::size_t>(max_owner) + 1, {});
  for (std::size_t v = 0; v < owners_.size(); ++v) {
    members_[static_cast<std::size_t>(owners_[v])].push_back(static_cast<NodeId>(v));
  }
  for (const Edge& e : base_edges_) {
    if (!valid_node(e.from) || !valid_node(e.to)) {
      throw InvalidInstance("edge (" + std::to_string(e.from) + "," + std::to_string(e.to) +
                            ") references an unknown node");
    }
    if (e.from == e.to) throw InvalidInstance("self loop on node " + std::to_string(e.from));
  }
  std::sort(base_edges_.begin(), base_edges_.end());
  base_edges_.erase(std::unique(base_edges_.begin(), base_edges_.end()), base_edges_.end());
  if (!valid_node(altruist_)) throw InvalidInstance("altruist is not a valid node id");
}

std::span<const NodeId> Instance::members(HospitalId h) const {
  if (h < 0 || static_cast<std::size_t>(h) >= members_.size()) return {};
  return members_[static_cast<std::size_t>(h)];
}

Instance Instance::with_probability(Probability p) const {
  return Instance(node_count(), owners_, base_edges_, altruist_, std::move(p));
}

Report Report::truthful(const Instance& instance) {
  return Report(instance, std::vector<bool>(instance.node_count(), true));
}

Report Report::hiding(const Instance& instance, HospitalId hospital, std::span<const NodeId> hidden) {
  std::vector<bool> declared(instance.node_count(), true);
  for (NodeId v : hidden) {
    if (!instance.valid_node(v)) throw PreconditionViolated("hidden node out of range");
    if (instance.owner(v) != hospital) {
      throw PreconditionViolated("hospital " + std::to_string(hospital) + " cannot hide node " + std::to_string(v) +
                                 " owned by another hospital");
    }
    declared[static_cast<std::size_t>(v)] = false;
  }
  return Report(instance, std::move(declared));
}

Report::Report(const Instance& instance, std::vector<bool> declared) : declared_(std::move(declared)) {
  if (declared_.size() != instance.node_count()) throw PreconditionViolated("report size does not match instance");
  if (!declared_[static_cast<std::size_t>(instance.altruist())]) {
    throw PreconditionViolated("the altruist must always be reported");
  }
}

std::vector<NodeId> Report::declared(const Instance& instance, HospitalId h) const {
  std::vector<NodeId> out;
  for (NodeId v : instance.members(h)) {
    if (declares(v)) out.push_back(v);
  }
  return out;
}

std::size_t Report::declared_count() const {
  return static_cast<std::size_t>(std::count(declared_.begin(), declared_.end(), true));
}

double edge_uniform(std::uint64_t seed, NodeId u, NodeId v) {
  const std::uint64_t pair = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
                             static_cast<std::uint32_t>(v);
  const std::uint64_t bits = splitmix64(splitmix64(seed) ^ splitmix64(pair ^ 0xD1B54A32D192ED03ULL));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

CompatibilityGraph sample_random_edges(std::shared_ptr<const Instance> instance, std::uint64_t seed) {
  if (!instance) throw PreconditionViolated("null instance");
  CompatibilityGraph g;
  g.instance_ = instance;
  g.seed_ = seed;
  const auto n = static_cast<NodeId>(instance->node_count());
  const double p = instance->edge_probability().value();
  if (p > 0.0) {
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = 0; v < n; ++v) {
        if (instance->owner(u) == instance->owner(v)) continue;
        if (edge_uniform(seed, u, v) < p) g.random_edges_.push_back({u, v});
      }
    }
  }
  // Both inputs are sorted; merge into the deduplicated effective set.
  const auto& base = instance->base_edges();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < base.size() || j < g.random_edges_.size()) {
    if (j == g.random_edges_.size() || (i < base.size() && base[i] < g.random_edges_[j])) {
      g.edges_.push_back(base[i++]);
      g.origins_.push_back(EdgeOrigin::kBase);
    } else if (i == base.size() || g.random_edges_[j] < base[i]) {
      g.edges_.push_back(g.random_edges_[j++]);
      g.origins_.push_back(EdgeOrigin::kRandom);
    } else {
      g.edges_.push_back(base[i]);
      g.origins_.push_back(EdgeOrigin::kBoth);
      ++i;
      ++j;
    }
  }
  g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const Edge& e : g.edges_) ++g.offsets_[static_cast<std::size_t>(e.from) + 1];
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.targets_.reserve(g.edges_.size());
  for (const Edge& e : g.edges_) g.targets_.push_back(e.to);
  return g;
}

EdgeOrigin CompatibilityGraph::provenance(Edge e) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  if (it == edges_.end() || *it != e) throw PreconditionViolated("edge not present in the compatibility graph");
  return origins_[static_cast<std::size_t>(it - edges_.begin())];
}

std::span<const NodeId> CompatibilityGraph::successors(NodeId v) const {
  const auto idx = static_cast<std::size_t>(v);
  return std::span<const NodeId>(targets_.data() + offsets_[idx], offsets_[idx + 1] - offsets_[idx]);
}

bool CompatibilityGraph::has_edge(NodeId u, NodeId v) const {
  auto succ = successors(u);
  return std::binary_search(succ.begin(), succ.end(), v);
}

ViewGraph::ViewGraph(const CompatibilityGraph& graph, const Report& report)
    : instance_(graph.instance_ptr()),
      present_(graph.instance().node_count(), false),
      adjacency_(graph.instance().node_count()) {
  const auto n = static_cast<NodeId>(present_.size());
  for (NodeId v = 0; v < n; ++v) {
    if (report.declares(v)) {
      present_[static_cast<std::size_t>(v)] = true;
      ++reported_;
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    if (!present_[static_cast<std::size_t>(v)]) continue;
    auto& out = adjacency_[static_cast<std::size_t>(v)];
    for (NodeId w : graph.successors(v)) {
      if (present_[static_cast<std::size_t>(w)]) out.push_back(w);
    }
  }
}

bool ViewGraph::has_edge(NodeId u, NodeId v) const {
  if (!contains(u) || !contains(v)) return false;
  const auto& succ = adjacency_[static_cast<std::size_t>(u)];
  return std::binary_search(succ.begin(), succ.end(), v);
}

std::vector<NodeId> ViewGraph::members(HospitalId h) const {
  std::vector<NodeId> out;
  for (NodeId v : instance_->members(h)) {
    if (contains(v)) out.push_back(v);
  }
  return out;
}

std::size_t ViewGraph::edge_count() const {
  std::size_t m = 0;
  for (const auto& out : adjacency_) m += out.size();
  return m;
}

ViewGraph full_view(const CompatibilityGraph& graph) {
  return ViewGraph(graph, Report::truthful(graph.instance()));
}

std::vector<Segment> segments(const Path& path, const Instance& instance) {
  std::vector<Segment> out;
  for (NodeId v : path.nodes) {
    const HospitalId h = instance.owner(v);
    if (out.empty() || out.back().owner != h) out.push_back(Segment{h, {}});
    out.back().path.nodes.push_back(v);
  }
  return out;
}

std::size_t utility(const Path& path, HospitalId hospital, const Instance& instance) {
  return static_cast<std::size_t>(
      std::count_if(path.nodes.begin(), path.nodes.end(), [&](NodeId v) { return instance.owner(v) == hospital; }));
}

std::vector<std::size_t> utilities(const Path& path, const Instance& instance) {
  std::vector<std::size_t> out(instance.hospital_count(), 0);
  for (NodeId v : path.nodes) ++out[static_cast<std::size_t>(instance.owner(v))];
  return out;
}

std::string path_defect(const Path& path, const ViewGraph& view) {
  if (path.empty()) return "path is empty";
  if (path.front() != view.altruist()) return "path does not start at the altruist";
  std::unordered_set<NodeId> seen;
  for (std::size_t i = 0; i < path.nodes.size(); ++i) {
    const NodeId v = path.nodes[i];
    if (!view.contains(v)) return "node " + std::to_string(v) + " is not in the view";
    if (!seen.insert(v).second) return "node " + std::to_string(v) + " repeats";
    if (i > 0 && !view.has_edge(path.nodes[i - 1], v)) {
      return "missing edge " + std::to_string(path.nodes[i - 1]) + "->" + std::to_string(v);
    }
  }
  return {};
}

bool is_internal_path(const Path& path, const ViewGraph& view) {
  if (path.empty()) return false;
  const HospitalId h = view.owner(path.front());
  std::unordered_set<NodeId> seen;
  for (std::size_t i = 0; i < path.nodes.size(); ++i) {
    const NodeId v = path.nodes[i];
    if (!view.contains(v) || view.owner(v) != h || !seen.insert(v).second) return false;
    if (i > 0 && !view.has_edge(path.nodes[i - 1], v)) return false;
  }
  return true;
}

}  // namespace kxchain
