#pragma once

// Exact welfare benchmarks, computed by exhaustive search over simple paths
// from the altruist.

#include <cstddef>
#include <optional>
#include <string_view>

#include "kxchain/graph.hpp"
#include "kxchain/search.hpp"

namespace kxchain {

enum class BenchmarkKind { kOpt, kSOpt, kAvgOpt, kPiIR };

std::string_view to_string(BenchmarkKind kind);
/// Accepts "opt", "sopt", "avgopt", "pi_ir". Throws PreconditionViolated.
BenchmarkKind parse_benchmark_kind(std::string_view text);

struct BenchmarkResult {
  BenchmarkKind kind = BenchmarkKind::kOpt;
  std::optional<std::size_t> s;
  /// Lexicographically smallest optimal witness; empty when no path qualifies.
  Path path;
  bool certified = false;

  std::size_t length() const { return path.length(); }
};

/// Longest path from the altruist.
BenchmarkResult opt(const ViewGraph& graph, const SearchLimits& limits = {});

/// Longest path from the altruist whose every segment has at least `s` nodes.
BenchmarkResult sopt(const ViewGraph& graph, std::size_t s, const SearchLimits& limits = {});

/// Longest path from the altruist on which every hospital with a segment has
/// mean segment length at least `s`.
BenchmarkResult avgopt(const ViewGraph& graph, std::size_t s, const SearchLimits& limits = {});

/// Longest internal path of the altruist owner starting at the altruist.
BenchmarkResult pi_ir(const ViewGraph& graph, const SearchLimits& limits = {});

BenchmarkResult compute_benchmark(const ViewGraph& graph, BenchmarkKind kind, std::size_t s,
                                  const SearchLimits& limits = {});

}  // namespace kxchain
