#pragma once

// Lower-bound instance families and random fuzz instances. Hospital 0 always
// owns the altruist.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kxchain/graph.hpp"
#include "kxchain/search.hpp"

namespace kxchain {

enum class CertificateStatus { kVerified, kConstructed };

std::string_view to_string(CertificateStatus status);

/// A claimed quantity of the instance. `relation` is "eq", "ge" or "le":
/// the measured quantity relates to `value` that way.
struct Certificate {
  std::string name;
  std::string relation = "eq";
  std::size_t value = 0;
  std::optional<std::size_t> s;
  CertificateStatus status = CertificateStatus::kConstructed;
};

struct GeneratedInstance {
  std::shared_ptr<const Instance> instance;
  std::string family;
  nlohmann::json params;
  std::vector<Certificate> certificates;

  const Certificate* find(std::string_view name) const;
};

/// Certificates are checked against the exact oracle on the base graph when
/// the search fits `limits`; a mismatch throws InvariantViolation, and an
/// over-budget check leaves the certificate marked constructed.

/// n = 4k. Hospital 0 owns a 2k-chain from the altruist whose k-th node also
/// leads into hospital 1's 2k-chain.
GeneratedInstance gen_worst_case_ir(std::size_t k, const Probability& p = {}, const SearchLimits& limits = {});

/// n = 8k+1. k blocks where hospital 0's entry node either continues with 2
/// hospital-0 nodes or detours through 3 hospital-1 nodes, then a hospital-1
/// k-chain and a hospital-0 k-chain.
GeneratedInstance gen_semirandom_ir(std::size_t k, const Probability& p = {}, const SearchLimits& limits = {});

/// n = 6k (6k-1 without x). Hospital 0 owns a 3k-chain from the altruist; its
/// k-th node reaches x, which leads into hospital 1's (3k-1)-chain.
GeneratedInstance gen_worst_case_ic(std::size_t k, bool include_x, const Probability& p = {},
                                    const SearchLimits& limits = {});

/// n = 6k (5k without squares). Per block, hospital 0's entry node continues
/// with 2 hospital-0 nodes, or via a hospital-0 square node through 2
/// hospital-1 nodes; both rejoin the next entry node.
GeneratedInstance gen_semirandom_ic(std::size_t k, bool include_squares, const Probability& p = {},
                                    const SearchLimits& limits = {});

/// Disjoint internal chains per hospital, no base cross edges. The altruist
/// heads hospital 0's first chain.
GeneratedInstance gen_chains(const std::vector<std::vector<std::size_t>>& chains, const Probability& p = {});

struct FuzzConfig {
  /// chain lengths per hospital; every hospital needs at least one node
  std::vector<std::vector<std::size_t>> chains;
  double internal_density = 0.0;
  double cross_density = 0.0;
  Probability p;
};

Instance gen_random_fuzz(const FuzzConfig& config, std::uint64_t seed);

/// A fuzz configuration with at most `max_n` nodes and 2 or 3 hospitals.
FuzzConfig random_fuzz_config(std::uint64_t seed, std::size_t max_n);

}  // namespace kxchain
