#pragma once

// Manipulation audits: hiding subsets, matching-time diversions, the
// individual-rationality deficit, per-lemma bound checks and Monte Carlo
// summaries. Every manipulated run reuses the truthful run's edge realization.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kxchain/graph.hpp"
#include "kxchain/outcome.hpp"
#include "kxchain/params.hpp"
#include "kxchain/search.hpp"

namespace kxchain {

enum class MechanismKind { kS, kAvg, kNaiveOpt };

std::string_view to_string(MechanismKind kind);
/// "s", "avg", "naive". Throws PreconditionViolated.
MechanismKind parse_mechanism_kind(std::string_view text);

/// Runs a mechanism on a view. kNaiveOpt returns the s-segment benchmark path.
MechanismOutcome run_mechanism(MechanismKind kind, const ViewGraph& view, std::size_t s,
                               const MechanismConfig& config = {});

struct Diversion {
  NodeId node = -1;  // the path leaves its original course here
  Path extension;    // starts at node
};

struct Manipulation {
  HospitalId hospital = 0;
  std::vector<NodeId> hidden;
  std::optional<Diversion> diversion;
};

struct DiversionResult {
  std::size_t utility = 0;
  std::optional<Diversion> diversion;  // nullopt: keeping the path is best
  Path path;
};

/// Best continuation of `path` after one of the hospital's nodes by an
/// internal path of the full graph avoiding the earlier prefix.
DiversionResult best_diversion(const Path& path, HospitalId hospital, const ViewGraph& full,
                               const SearchLimits& limits = {});

struct SubsetPolicy {
  std::size_t exhaustive_cap = 12;
  /// Subsets drawn when the hospital is above the cap.
  std::size_t samples = 256;
  std::uint64_t sample_seed = 0;
  bool force_exhaustive = false;
  bool diversions = true;
};

struct HospitalAudit {
  HospitalId hospital = 0;
  std::size_t truthful_utility = 0;
  std::size_t best_hiding_utility = 0;  // hiding only
  std::size_t best_utility = 0;         // hiding and diversion
  double gap_ratio = 0.0;
  Manipulation witness;
  std::size_t subsets_evaluated = 0;
  bool exhaustive = true;
  /// Long-segments only: selected-path counts from the exact-length step.
  std::optional<std::size_t> truthful_selected;
  std::optional<std::size_t> max_manipulated_selected;
  /// Manipulations (hiding plus diversion) that beat the truthful utility.
  std::size_t manipulations_with_gain = 0;
};

struct AuditReport {
  MechanismKind mechanism = MechanismKind::kS;
  std::uint64_t seed = 0;
  std::size_t s = 0;
  MechanismOutcome truthful;
  std::vector<HospitalAudit> hospitals;
};

HospitalAudit audit_hiding(MechanismKind mechanism, const CompatibilityGraph& graph, HospitalId hospital,
                           std::size_t s, const MechanismConfig& config = {}, const SubsetPolicy& policy = {},
                           const MechanismOutcome* truthful = nullptr);

AuditReport audit_all(MechanismKind mechanism, const CompatibilityGraph& graph, std::size_t s,
                      const MechanismConfig& config = {}, const SubsetPolicy& policy = {});

struct IrCheck {
  std::size_t pi_ir_length = 0;
  std::size_t altruist_owner_utility = 0;
  std::size_t deficit = 0;
};

IrCheck ir_check(const MechanismOutcome& outcome, const ViewGraph& full, const SearchLimits& limits = {});

struct BoundCheck {
  HospitalId hospital = 0;
  std::string rule;
  double bound = 0.0;
  double observed = 0.0;
  double margin = 0.0;
  bool pass = true;
};

/// Checks the manipulation bound for each audited hospital where it applies.
/// High-averages: d <= (1 + 1/paths_i) l + 2 s' when the truthful run selected
/// path sets and paths_i >= 1. Long-segments: hiding-only d <= r_i s' (or the
/// special hospital's selected total) after a truthful stitched success.
std::vector<BoundCheck> lemma_bound_check(const AuditReport& report);

struct MonteCarloSummary {
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  double mean_welfare = 0.0;
  std::optional<double> welfare_ratio;
  std::vector<double> mean_utility;
};

struct TrialRecord {
  std::uint64_t seed = 0;
  MechanismOutcome outcome;
};

MonteCarloSummary monte_carlo(MechanismKind mechanism, const std::shared_ptr<const Instance>& instance,
                              std::size_t s, std::size_t trials, std::uint64_t seed0,
                              const MechanismConfig& config = {}, std::optional<std::size_t> benchmark = {},
                              std::vector<TrialRecord>* records = nullptr);

}  // namespace kxchain
