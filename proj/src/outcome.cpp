#include "kxchain/outcome.hpp"

#include <algorithm>

#include "kxchain/digest.hpp"

namespace kxchain {

std::string_view to_string(OutcomeStatus status) {
  return status == OutcomeStatus::kSuccess ? "success" : "failure";
}

std::string_view to_string(ReturnPoint point) {
  switch (point) {
    case ReturnPoint::kBelowMinN: return "below_min_n";
    case ReturnPoint::kNoAltruistPath: return "no_altruist_path";
    case ReturnPoint::kStitched: return "stitched";
    case ReturnPoint::kStitchFailed: return "stitch_failed";
    case ReturnPoint::kIrOnly: return "ir_only";
    case ReturnPoint::kDegenerateNormalization: return "degenerate_normalization";
    case ReturnPoint::kStitch1Success: return "stitch1_success";
    case ReturnPoint::kStitch1Failure: return "stitch1_failure";
    case ReturnPoint::kSmallExploration: return "small_exploration";
    case ReturnPoint::kStitch2Success: return "stitch2_success";
    case ReturnPoint::kStitch2Failure: return "stitch2_failure";
    case ReturnPoint::kNoWitness: return "no_witness";
    case ReturnPoint::kBaseline: return "baseline";
  }
  return "?";
}

std::size_t Trace::count(std::string_view kind) const {
  return static_cast<std::size_t>(
      std::count_if(events_.begin(), events_.end(), [&](const TraceEvent& e) { return e.kind == kind; }));
}

nlohmann::json Trace::to_json() const {
  auto out = nlohmann::json::array();
  for (const auto& e : events_) out.push_back({{"kind", e.kind}, {"data", e.data}});
  return out;
}

std::string Trace::digest() const { return sha256_hex(to_json().dump()); }

nlohmann::json path_json(const Path& path) { return path.nodes; }

nlohmann::json pathset_json(const PathSet& set) {
  auto paths = nlohmann::json::array();
  for (const auto& p : set.paths) paths.push_back(path_json(p));
  return {{"owner", set.owner}, {"paths", paths}};
}

}  // namespace kxchain
