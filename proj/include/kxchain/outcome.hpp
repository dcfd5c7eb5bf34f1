#pragma once

// Mechanism results and the decision trace both mechanisms record.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kxchain/graph.hpp"
#include "kxchain/params.hpp"
#include "kxchain/stitch.hpp"

namespace kxchain {

enum class OutcomeStatus { kSuccess, kFailure };

/// Where the mechanism returned.
enum class ReturnPoint {
  kBelowMinN,
  kNoAltruistPath,       // long-segments: no s'-node internal path from the altruist
  kStitched,
  kStitchFailed,
  kIrOnly,               // high-averages: altruist owner inactive or alone
  kDegenerateNormalization,
  kStitch1Success,
  kStitch1Failure,
  kSmallExploration,     // high-averages: search ended with fewer than s' explored nodes
  kStitch2Success,
  kStitch2Failure,
  kNoWitness,            // high-averages: no explored node reaches a path head
  kBaseline,             // benchmark baseline mechanism
};

std::string_view to_string(OutcomeStatus status);
std::string_view to_string(ReturnPoint point);

struct TraceEvent {
  std::string kind;
  nlohmann::json data;
};

class Trace {
 public:
  void add(std::string kind, nlohmann::json data) { events_.push_back({std::move(kind), std::move(data)}); }
  const std::vector<TraceEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  std::size_t count(std::string_view kind) const;

  nlohmann::json to_json() const;
  /// SHA-256 over the compact JSON form.
  std::string digest() const;

 private:
  std::vector<TraceEvent> events_;
};

struct SRunDetails {
  MechParamsS params;
  std::vector<PathSet> initial_sets;  // exact-length sets, indexed by hospital
  std::optional<HospitalId> special;
  std::vector<PathSet> final_sets;    // after the special hospital is redefined
  std::vector<StitchEntry> sequence;  // alternating order handed to stitch
  std::vector<StitchLink> links;
};

struct AvgRunDetails {
  MechParamsAvg params;
  std::vector<std::size_t> counts;  // count_paths per hospital
  std::vector<std::size_t> capped;  // after cap_special
  std::optional<HospitalId> special;
  bool reached_selection = false;
  std::vector<PathSet> selected;    // max-total selection
  std::vector<PathSet> normalized;
  std::vector<NodeId> explored;     // Exp, insertion order
  std::vector<std::size_t> exp_sizes;
  std::size_t max_exp = 0;
  std::vector<StitchLink> links;
  std::size_t stitch_count = 0;
};

struct MechanismOutcome {
  OutcomeStatus status = OutcomeStatus::kFailure;
  Path path;
  ReturnPoint returned_at = ReturnPoint::kBelowMinN;
  Trace trace;
  std::optional<SRunDetails> s_details;
  std::optional<AvgRunDetails> avg_details;

  bool success() const { return status == OutcomeStatus::kSuccess; }
};

nlohmann::json path_json(const Path& path);
nlohmann::json pathset_json(const PathSet& set);

}  // namespace kxchain
