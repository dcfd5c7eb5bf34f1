#include "kxchain/mechanism_s.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "kxchain/arrangement.hpp"
#include "kxchain/errors.hpp"
#include "kxchain/packing.hpp"
#include "kxchain/stitch.hpp"

namespace kxchain {

PathSet max_count_exact_length_paths(const ViewGraph& view, HospitalId h, std::size_t length,
                                     std::optional<NodeId> anchor, const SearchLimits& limits) {
  PackingProfile profile(view, h, length, anchor, limits);
  const auto m = profile.max_count();
  if (!m) throw PreconditionViolated("no internal path of the required length starts at the anchor");
  PathSet set = profile.witness(*m);
  for (auto& p : set.paths) p.nodes.resize(length);
  std::sort(set.paths.begin(), set.paths.end());
  return set;
}

HospitalId select_special(const std::map<HospitalId, std::size_t>& counts) {
  if (counts.empty()) throw PreconditionViolated("select_special needs at least one hospital");
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

PathSet redefine_special_paths(const ViewGraph& view, HospitalId j, std::size_t lower, std::size_t upper,
                               std::size_t min_length, std::optional<NodeId> anchor, const SearchLimits& limits) {
  PackingProfile profile(view, j, min_length, anchor, limits);
  const std::size_t from = anchor ? std::max<std::size_t>(1, lower) : lower;
  std::optional<std::size_t> best_m;
  std::size_t best_total = 0;
  for (std::size_t m = from; m <= upper; ++m) {
    const auto total = profile.best_total(m);
    if (total && (!best_m || *total > best_total)) {
      best_m = m;
      best_total = *total;
    }
  }
  if (!best_m) {
    throw PreconditionViolated("no path set of hospital " + std::to_string(j) + " has between " +
                               std::to_string(lower) + " and " + std::to_string(upper) + " paths");
  }
  return profile.witness(*best_m);
}

namespace {

void check_output(const MechanismOutcome& out, const ViewGraph& view) {
  const std::string defect = path_defect(out.path, view);
  if (!defect.empty()) throw InvariantViolation("mechanism returned an invalid path: " + defect);
}

}  // namespace

MechanismOutcome run_mechanism_s(const ViewGraph& view, std::size_t s, const MechanismConfig& config) {
  MechanismOutcome out;
  const NodeId alpha = view.altruist();
  const HospitalId a = view.altruist_owner();
  const std::size_t n = view.reported_count();
  const auto params = MechParamsS::derive(s, config.divisor.evaluate(n));
  out.trace.add("params", {{"mechanism", "s"},
                           {"n", n},
                           {"s", params.s},
                           {"s_prime", params.s_prime},
                           {"s_dprime", params.s_dprime},
                           {"f", params.f_value}});
  SRunDetails details;
  details.params = params;
  auto finish = [&](OutcomeStatus status, Path path, ReturnPoint point) {
    out.status = status;
    out.path = std::move(path);
    out.returned_at = point;
    out.trace.add("return", {{"status", to_string(status)}, {"at", to_string(point)}, {"path", path_json(out.path)}});
    out.s_details = std::move(details);
    check_output(out, view);
    return out;
  };

  if (n < config.min_n) return finish(OutcomeStatus::kFailure, Path{{alpha}}, ReturnPoint::kBelowMinN);

  const Path lead = longest_internal_path_from(view, alpha, config.limits, {}, params.s_prime);
  if (lead.length() < params.s_prime) {
    return finish(OutcomeStatus::kSuccess, Path{{alpha}}, ReturnPoint::kNoAltruistPath);
  }

  const auto hospitals = static_cast<HospitalId>(view.hospital_count());
  std::vector<PathSet> sets;
  std::map<HospitalId, std::size_t> counts;
  for (HospitalId h = 0; h < hospitals; ++h) {
    sets.push_back(max_count_exact_length_paths(view, h, params.s_prime, h == a ? std::optional(alpha) : std::nullopt,
                                                config.limits));
    counts[h] = sets.back().count();
    out.trace.add("pathset", {{"stage", "exact_length"}, {"set", pathset_json(sets.back())}});
  }
  details.initial_sets = sets;

  const HospitalId j = select_special(counts);
  std::size_t lower = 0;
  std::size_t others = 0;
  for (const auto& [h, c] : counts) {
    if (h == j) continue;
    lower = std::max(lower, c);
    others += c;
  }
  const std::size_t upper = others + (j == a ? 1 : 0);
  sets[static_cast<std::size_t>(j)] = redefine_special_paths(view, j, lower, upper, params.s_prime,
                                                             j == a ? std::optional(alpha) : std::nullopt, config.limits);
  details.special = j;
  out.trace.add("special", {{"hospital", j},
                            {"lower", lower},
                            {"upper", upper},
                            {"set", pathset_json(sets[static_cast<std::size_t>(j)])}});
  for (const auto& set : sets) {
    const std::size_t c = set.count();
    if (set.owner == j && (c < lower || c > upper)) throw InvariantViolation("special path count out of range");
  }
  details.final_sets = sets;

  std::vector<StitchEntry> items;
  std::vector<int> colors;
  std::optional<std::size_t> lead_index;
  for (const auto& set : sets) {
    for (const auto& p : set.paths) {
      if (p.front() == alpha) lead_index = items.size();
      items.push_back({set.owner, p});
      colors.push_back(set.owner);
    }
  }
  if (!lead_index) throw InvariantViolation("no selected path starts at the altruist");

  std::vector<std::size_t> order;
  const auto a_count = static_cast<std::size_t>(std::count(colors.begin(), colors.end(), a));
  if (items.size() == 1) {
    order = {*lead_index};
  } else if (2 * a_count > items.size()) {
    std::vector<std::size_t> rest_index;
    std::vector<int> rest_colors;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i == *lead_index) continue;
      rest_index.push_back(i);
      rest_colors.push_back(colors[i]);
    }
    auto rest = arrange_alternating(rest_colors);
    auto start = std::find_if(rest.begin(), rest.end(), [&](std::size_t r) { return rest_colors[r] != a; });
    std::rotate(rest.begin(), start, rest.end());
    order.push_back(*lead_index);
    for (std::size_t r : rest) order.push_back(rest_index[r]);
  } else {
    order = arrange_alternating(colors, lead_index);
  }

  StitchPlan plan;
  plan.window = params.s_dprime;
  auto seq_json = nlohmann::json::array();
  for (std::size_t i : order) {
    plan.sequence.push_back(items[i]);
    seq_json.push_back({{"owner", items[i].owner}, {"path", path_json(items[i].path)}});
  }
  out.trace.add("ordering", {{"sequence", seq_json}});
  details.sequence = plan.sequence;

  const StitchResult stitched = stitch(plan, view);
  details.links = stitched.links;
  auto links = nlohmann::json::array();
  for (const auto& l : stitched.links) links.push_back({l.tail, l.head});
  out.trace.add("stitch", {{"window", plan.window},
                           {"links", links},
                           {"failed_at", stitched.failed_at ? nlohmann::json(*stitched.failed_at) : nlohmann::json()}});
  if (!stitched.path) return finish(OutcomeStatus::kFailure, Path{{alpha}}, ReturnPoint::kStitchFailed);
  return finish(OutcomeStatus::kSuccess, *stitched.path, ReturnPoint::kStitched);
}

}  // namespace kxchain
