#pragma once

// Directed compatibility-graph model: instances with hospital ownership, the
// sampled random cross edges, reported views, paths and their segments.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kxchain {

using NodeId = std::int32_t;
using HospitalId = std::int32_t;

struct Edge {
  NodeId from = 0;
  NodeId to = 0;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Edge probability kept both as the decimal text it was written with (for
/// byte-stable serialization) and as a double (for sampling).
class Probability {
 public:
  Probability() = default;

  /// Accepts plain decimal notation such as "0", "1", "0.25". Throws InvalidInstance.
  static Probability parse(std::string_view text);

  double value() const { return value_; }
  const std::string& text() const { return text_; }

 private:
  std::string text_ = "0";
  double value_ = 0.0;
};

struct Path {
  std::vector<NodeId> nodes;

  std::size_t length() const { return nodes.size(); }
  bool empty() const { return nodes.empty(); }
  NodeId front() const { return nodes.front(); }
  NodeId back() const { return nodes.back(); }

  friend auto operator<=>(const Path&, const Path&) = default;
};

/// Disjoint internal paths owned by one hospital.
struct PathSet {
  HospitalId owner = 0;
  std::vector<Path> paths;

  std::size_t count() const { return paths.size(); }
  std::size_t total_length() const;
};

class Instance {
 public:
  /// Validates every invariant (ownership total, no self loops, ids in range,
  /// altruist valid). Duplicate base edges are collapsed. Throws InvalidInstance.
  Instance(std::size_t node_count, std::vector<HospitalId> owners, std::vector<Edge> base_edges,
           NodeId altruist, Probability p);

  std::size_t node_count() const { return owners_.size(); }
  std::size_t hospital_count() const { return members_.size(); }
  HospitalId owner(NodeId v) const { return owners_[static_cast<std::size_t>(v)]; }
  const std::vector<HospitalId>& owners() const { return owners_; }
  /// Sorted and deduplicated.
  const std::vector<Edge>& base_edges() const { return base_edges_; }
  NodeId altruist() const { return altruist_; }
  HospitalId altruist_owner() const { return owner(altruist_); }
  const Probability& edge_probability() const { return p_; }
  /// Nodes of hospital h in ascending id order.
  std::span<const NodeId> members(HospitalId h) const;
  bool valid_node(NodeId v) const { return v >= 0 && static_cast<std::size_t>(v) < owners_.size(); }

  Instance with_probability(Probability p) const;

 private:
  std::vector<HospitalId> owners_;
  std::vector<Edge> base_edges_;
  NodeId altruist_;
  Probability p_;
  std::vector<std::vector<NodeId>> members_;
};

/// Per-node declaration mask. The altruist is always declared.
class Report {
 public:
  static Report truthful(const Instance& instance);
  /// Truthful for everyone except `hospital`, which withholds `hidden`.
  static Report hiding(const Instance& instance, HospitalId hospital, std::span<const NodeId> hidden);

  Report(const Instance& instance, std::vector<bool> declared);

  bool declares(NodeId v) const { return declared_[static_cast<std::size_t>(v)]; }
  std::vector<NodeId> declared(const Instance& instance, HospitalId h) const;
  std::size_t declared_count() const;

 private:
  std::vector<bool> declared_;
};

enum class EdgeOrigin : std::uint8_t { kBase = 1, kRandom = 2, kBoth = 3 };

/// Uniform draw in [0, 1) for the ordered pair (u, v) under `seed`. Counter
/// based, so the realization of one pair never depends on any other pair.
double edge_uniform(std::uint64_t seed, NodeId u, NodeId v);

class ViewGraph;

/// Base graph plus one realization of the random cross edges.
class CompatibilityGraph {
 public:
  const Instance& instance() const { return *instance_; }
  const std::shared_ptr<const Instance>& instance_ptr() const { return instance_; }
  std::uint64_t seed() const { return seed_; }

  /// Sorted. May overlap with base edges.
  const std::vector<Edge>& random_edges() const { return random_edges_; }
  /// Effective edge set E_base ∪ E_p, sorted and deduplicated.
  const std::vector<Edge>& edges() const { return edges_; }
  /// Throws PreconditionViolated when the edge is absent.
  EdgeOrigin provenance(Edge e) const;

  std::span<const NodeId> successors(NodeId v) const;
  bool has_edge(NodeId u, NodeId v) const;

 private:
  friend CompatibilityGraph sample_random_edges(std::shared_ptr<const Instance>, std::uint64_t);

  std::shared_ptr<const Instance> instance_;
  std::uint64_t seed_ = 0;
  std::vector<Edge> random_edges_;
  std::vector<Edge> edges_;
  std::vector<EdgeOrigin> origins_;  // parallel to edges_
  std::vector<std::size_t> offsets_;  // CSR over edges_
  std::vector<NodeId> targets_;
};

CompatibilityGraph sample_random_edges(std::shared_ptr<const Instance> instance, std::uint64_t seed);

/// What a mechanism sees: the subgraph induced by the declared nodes, with
/// ownership and the altruist, but without edge provenance. Node ids keep
/// their global meaning; undeclared nodes are simply absent.
class ViewGraph {
 public:
  ViewGraph(const CompatibilityGraph& graph, const Report& report);

  const Instance& instance() const { return *instance_; }
  std::size_t node_count() const { return present_.size(); }
  std::size_t reported_count() const { return reported_; }
  bool contains(NodeId v) const {
    return v >= 0 && static_cast<std::size_t>(v) < present_.size() && present_[static_cast<std::size_t>(v)];
  }
  HospitalId owner(NodeId v) const { return instance_->owner(v); }
  NodeId altruist() const { return instance_->altruist(); }
  HospitalId altruist_owner() const { return instance_->altruist_owner(); }
  std::size_t hospital_count() const { return instance_->hospital_count(); }

  /// Ascending, restricted to declared nodes.
  std::span<const NodeId> successors(NodeId v) const { return adjacency_[static_cast<std::size_t>(v)]; }
  bool has_edge(NodeId u, NodeId v) const;
  /// Declared nodes of h, ascending.
  std::vector<NodeId> members(HospitalId h) const;
  std::size_t edge_count() const;

 private:
  std::shared_ptr<const Instance> instance_;
  std::vector<bool> present_;
  std::size_t reported_ = 0;
  std::vector<std::vector<NodeId>> adjacency_;
};

ViewGraph full_view(const CompatibilityGraph& graph);

struct Segment {
  HospitalId owner = 0;
  Path path;
};

/// Maximal single-owner blocks of `path`, in order.
std::vector<Segment> segments(const Path& path, const Instance& instance);

inline std::size_t welfare(const Path& path) { return path.length(); }
std::size_t utility(const Path& path, HospitalId hospital, const Instance& instance);
/// utility for every hospital, indexed by hospital id.
std::vector<std::size_t> utilities(const Path& path, const Instance& instance);

/// Empty string when `path` is simple, nonempty, starts at the altruist and
/// uses only nodes and edges of `view`; otherwise a description of the defect.
std::string path_defect(const Path& path, const ViewGraph& view);

/// True when consecutive nodes are joined by internal edges of one owner.
bool is_internal_path(const Path& path, const ViewGraph& view);

}  // namespace kxchain
