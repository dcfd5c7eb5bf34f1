#include "kxchain/benchmarks.hpp"

#include <string>
#include <vector>

#include "kxchain/errors.hpp"

namespace kxchain {

namespace {

struct AnyNode {
  bool allowed(NodeId) const { return true; }
  bool can_append(NodeId) const { return true; }
  void push(NodeId) {}
  void pop() {}
  bool feasible() const { return true; }
};

struct AltruistOwnerOnly {
  const ViewGraph* view;
  HospitalId owner;

  bool allowed(NodeId v) const { return view->owner(v) == owner; }
  bool can_append(NodeId) const { return true; }
  void push(NodeId) {}
  void pop() {}
  bool feasible() const { return true; }
};

// A hop may only leave a segment that already has s nodes, and the path is a
// candidate only when its open (last) segment also has s nodes.
struct LongSegments {
  const ViewGraph* view;
  std::size_t s;
  std::vector<HospitalId> owner_stack;
  std::vector<std::size_t> segment_stack;

  bool allowed(NodeId) const { return true; }
  bool can_append(NodeId w) const {
    return owner_stack.empty() || view->owner(w) == owner_stack.back() || segment_stack.back() >= s;
  }
  void push(NodeId v) {
    const HospitalId h = view->owner(v);
    if (owner_stack.empty() || owner_stack.back() != h) {
      segment_stack.push_back(1);
    } else {
      segment_stack.push_back(segment_stack.back() + 1);
    }
    owner_stack.push_back(h);
  }
  void pop() {
    owner_stack.pop_back();
    segment_stack.pop_back();
  }
  bool feasible() const { return !segment_stack.empty() && segment_stack.back() >= s; }
};

struct HighAverages {
  const ViewGraph* view;
  std::size_t s;
  std::vector<std::size_t> nodes;
  std::vector<std::size_t> segs;
  std::vector<HospitalId> owner_stack;
  std::vector<char> opened;

  HighAverages(const ViewGraph* v, std::size_t s_value)
      : view(v), s(s_value), nodes(v->hospital_count(), 0), segs(v->hospital_count(), 0) {}

  bool allowed(NodeId) const { return true; }
  bool can_append(NodeId) const { return true; }
  void push(NodeId v) {
    const HospitalId h = view->owner(v);
    const bool open = owner_stack.empty() || owner_stack.back() != h;
    ++nodes[static_cast<std::size_t>(h)];
    if (open) ++segs[static_cast<std::size_t>(h)];
    owner_stack.push_back(h);
    opened.push_back(open ? 1 : 0);
  }
  void pop() {
    const auto h = static_cast<std::size_t>(owner_stack.back());
    --nodes[h];
    if (opened.back()) --segs[h];
    owner_stack.pop_back();
    opened.pop_back();
  }
  bool feasible() const {
    for (std::size_t h = 0; h < nodes.size(); ++h) {
      if (segs[h] > 0 && nodes[h] < s * segs[h]) return false;
    }
    return true;
  }
};

void require_positive(std::size_t s) {
  if (s == 0) throw PreconditionViolated("benchmark parameter s must be at least 1");
}

}  // namespace

std::string_view to_string(BenchmarkKind kind) {
  switch (kind) {
    case BenchmarkKind::kOpt: return "opt";
    case BenchmarkKind::kSOpt: return "sopt";
    case BenchmarkKind::kAvgOpt: return "avgopt";
    case BenchmarkKind::kPiIR: return "pi_ir";
  }
  return "?";
}

BenchmarkKind parse_benchmark_kind(std::string_view text) {
  if (text == "opt") return BenchmarkKind::kOpt;
  if (text == "sopt") return BenchmarkKind::kSOpt;
  if (text == "avgopt") return BenchmarkKind::kAvgOpt;
  if (text == "pi_ir" || text == "pi-ir") return BenchmarkKind::kPiIR;
  throw PreconditionViolated("unknown benchmark kind '" + std::string(text) + "'");
}

BenchmarkResult opt(const ViewGraph& graph, const SearchLimits& limits) {
  AnyNode policy;
  return {BenchmarkKind::kOpt, std::nullopt, search_longest(graph, graph.altruist(), policy, limits), true};
}

BenchmarkResult sopt(const ViewGraph& graph, std::size_t s, const SearchLimits& limits) {
  require_positive(s);
  LongSegments policy{&graph, s, {}, {}};
  return {BenchmarkKind::kSOpt, s, search_longest(graph, graph.altruist(), policy, limits), true};
}

BenchmarkResult avgopt(const ViewGraph& graph, std::size_t s, const SearchLimits& limits) {
  require_positive(s);
  HighAverages policy(&graph, s);
  return {BenchmarkKind::kAvgOpt, s, search_longest(graph, graph.altruist(), policy, limits), true};
}

BenchmarkResult pi_ir(const ViewGraph& graph, const SearchLimits& limits) {
  AltruistOwnerOnly policy{&graph, graph.altruist_owner()};
  return {BenchmarkKind::kPiIR, std::nullopt, search_longest(graph, graph.altruist(), policy, limits), true};
}

BenchmarkResult compute_benchmark(const ViewGraph& graph, BenchmarkKind kind, std::size_t s,
                                  const SearchLimits& limits) {
  switch (kind) {
    case BenchmarkKind::kOpt: return opt(graph, limits);
    case BenchmarkKind::kSOpt: return sopt(graph, s, limits);
    case BenchmarkKind::kAvgOpt: return avgopt(graph, s, limits);
    case BenchmarkKind::kPiIR: return pi_ir(graph, limits);
  }
  throw PreconditionViolated("unknown benchmark kind");
}

}  // namespace kxchain
