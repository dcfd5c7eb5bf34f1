#include "kxchain/mechanism_avg.hpp"

#include <algorithm>
#include <numeric>

#include "kxchain/arrangement.hpp"
#include "kxchain/benchmarks.hpp"
#include "kxchain/errors.hpp"
#include "kxchain/packing.hpp"
#include "kxchain/stitch.hpp"

namespace kxchain {

std::size_t count_paths(const ViewGraph& view, HospitalId h, std::size_t s, std::size_t f_value,
                        const SearchLimits& limits) {
  PackingProfile profile(view, h, 1, std::nullopt, limits);
  std::size_t best = 0;
  const std::size_t top = profile.max_count().value_or(0);
  for (std::size_t m = 1; m <= top; ++m) {
    const auto total = profile.best_total(m);
    if (total && *total >= m * s) best = m;
  }
  return f_value * best;
}

std::map<HospitalId, std::size_t> cap_special(const std::map<HospitalId, std::size_t>& counts) {
  if (counts.empty()) return {};
  auto j = counts.begin();
  std::size_t total = 0;
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    total += it->second;
    if (it->second > j->second) j = it;
  }
  auto out = counts;
  out[j->first] = std::min(j->second, total - j->second);
  return out;
}

PathSet select_paths_max_total(const ViewGraph& view, HospitalId h, std::size_t cap, const SearchLimits& limits) {
  if (cap == 0) throw PreconditionViolated("path cap must be at least 1");
  PackingProfile profile(view, h, 1, std::nullopt, limits);
  std::size_t best_m = 0;
  std::size_t best_total = 0;
  const std::size_t top = std::min(cap, profile.max_count().value_or(0));
  for (std::size_t m = 1; m <= top; ++m) {
    const auto total = profile.best_total(m);
    if (total && *total > best_total) {
      best_total = *total;
      best_m = m;
    }
  }
  return profile.witness(best_m);
}

NormalizeResult normalize_pathsets(std::vector<PathSet> sets, const std::vector<std::size_t>& counts,
                                   std::size_t s_prime) {
  NormalizeResult result;
  const std::size_t piece = 4 * s_prime;
  for (auto& set : sets) {
    std::erase_if(set.paths, [&](const Path& p) { return p.length() < piece; });
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    auto& set = sets[i];
    const std::size_t need = i < counts.size() ? counts[i] : 0;
    while (set.count() < need) {
      if (set.paths.empty()) {
        result.degenerate = true;
        result.reason = "hospital " + std::to_string(set.owner) + " has no path left to split";
        result.sets = std::move(sets);
        return result;
      }
      auto longest = set.paths.begin();
      for (auto it = set.paths.begin(); it != set.paths.end(); ++it) {
        if (it->length() > longest->length()) longest = it;
      }
      if (longest->length() < 2 * piece) {
        result.degenerate = true;
        result.reason = "hospital " + std::to_string(set.owner) + " longest path has " +
                        std::to_string(longest->length()) + " nodes, splitting needs " + std::to_string(2 * piece);
        result.sets = std::move(sets);
        return result;
      }
      Path tail{std::vector<NodeId>(longest->nodes.end() - static_cast<long>(piece), longest->nodes.end())};
      longest->nodes.resize(longest->length() - piece);
      set.paths.push_back(std::move(tail));
      std::sort(set.paths.begin(), set.paths.end());
    }
  }
  result.sets = std::move(sets);
  return result;
}

SearchResult graph_search(const ViewGraph& view, std::vector<PathSet>& sets, const std::vector<bool>& active,
                          std::size_t s_prime) {
  const std::size_t n = view.node_count();
  SearchResult result;
  result.parent.assign(n, -1);
  std::vector<char> in_exp(n, 0);
  std::vector<long> loc_set(n, -1);
  std::vector<std::size_t> loc_index(n, 0);
  std::vector<std::size_t> loc_pos(n, 0);
  for (std::size_t h = 0; h < sets.size(); ++h) {
    for (std::size_t i = 0; i < sets[h].paths.size(); ++i) {
      const auto& nodes = sets[h].paths[i].nodes;
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        const auto v = static_cast<std::size_t>(nodes[q]);
        loc_set[v] = static_cast<long>(h);
        loc_index[v] = i;
        loc_pos[v] = q;
      }
    }
  }
  auto explore = [&](NodeId v) {
    in_exp[static_cast<std::size_t>(v)] = 1;
    result.explored.push_back(v);
  };

  NodeId nu = view.altruist();
  while (true) {
    explore(nu);
    const auto vi = static_cast<std::size_t>(nu);
    if (loc_set[vi] >= 0) {
      const PathRef ref{static_cast<std::size_t>(loc_set[vi]), loc_index[vi]};
      auto& nodes = sets[ref.hospital].paths[ref.index].nodes;
      Path suffix{std::vector<NodeId>(nodes.begin() + static_cast<long>(loc_pos[vi]), nodes.end())};
      nodes.resize(loc_pos[vi]);
      for (NodeId w : suffix.nodes) loc_set[static_cast<std::size_t>(w)] = -1;
      if (suffix.length() >= s_prime) {
        result.exp_sizes.push_back(result.explored.size());
        result.kind = SearchResult::Kind::kFound;
        result.nu = nu;
        result.on = ref;
        result.suffix = std::move(suffix);
        return result;
      }
      for (std::size_t t = 1; t < suffix.length(); ++t) {
        result.parent[static_cast<std::size_t>(suffix.nodes[t])] = suffix.nodes[t - 1];
        explore(suffix.nodes[t]);
      }
    }
    result.exp_sizes.push_back(result.explored.size());
    if (result.explored.size() >= s_prime) {
      result.kind = SearchResult::Kind::kSaturated;
      return result;
    }
    NodeId next = -1;
    for (NodeId x : result.explored) {
      for (NodeId w : view.successors(x)) {
        if (in_exp[static_cast<std::size_t>(w)] || !active[static_cast<std::size_t>(view.owner(w))]) continue;
        if (next < 0 || w < next) next = w;
      }
    }
    if (next < 0) {
      result.kind = SearchResult::Kind::kExhausted;
      return result;
    }
    for (NodeId x : result.explored) {
      if (view.has_edge(x, next)) {
        result.parent[static_cast<std::size_t>(next)] = x;
        break;
      }
    }
    nu = next;
  }
}

Path explored_path(const SearchResult& search, NodeId v) {
  Path path;
  for (NodeId x = v; x >= 0; x = search.parent[static_cast<std::size_t>(x)]) path.nodes.push_back(x);
  std::reverse(path.nodes.begin(), path.nodes.end());
  return path;
}

std::optional<Witness> find_witness(const ViewGraph& view, const SearchResult& search,
                                    const std::vector<PathSet>& sets, std::size_t s_prime) {
  std::vector<NodeId> order = search.explored;
  std::sort(order.begin(), order.end());
  for (NodeId v : order) {
    for (std::size_t h = 0; h < sets.size(); ++h) {
      for (std::size_t i = 0; i < sets[h].paths.size(); ++i) {
        const auto& nodes = sets[h].paths[i].nodes;
        const std::size_t limit = std::min(s_prime, nodes.size());
        for (std::size_t q = 0; q < limit; ++q) {
          if (view.has_edge(v, nodes[q])) return Witness{v, {h, i}, q};
        }
      }
    }
  }
  return std::nullopt;
}

namespace {

struct Flat {
  std::vector<StitchEntry> items;
  std::vector<int> colors;
  std::size_t target = 0;
};

Flat flatten(const std::vector<PathSet>& sets, PathRef target) {
  Flat flat;
  for (std::size_t h = 0; h < sets.size(); ++h) {
    for (std::size_t i = 0; i < sets[h].paths.size(); ++i) {
      if (h == target.hospital && i == target.index) flat.target = flat.items.size();
      flat.items.push_back({sets[h].owner, sets[h].paths[i]});
      flat.colors.push_back(sets[h].owner);
    }
  }
  return flat;
}

nlohmann::json links_json(const std::vector<StitchLink>& links) {
  auto out = nlohmann::json::array();
  for (const auto& l : links) out.push_back({l.tail, l.head});
  return out;
}

}  // namespace

StitchAttempt stitch1(const ViewGraph& view, const SearchResult& search, const std::vector<PathSet>& sets,
                      std::size_t s_prime, Trace* trace) {
  const Flat flat = flatten(sets, search.on);
  const auto order = arrange_alternating(flat.colors, flat.target);
  const StitchEntry& pi = flat.items[flat.target];
  Path lead = explored_path(search, search.nu);
  lead.nodes.insert(lead.nodes.end(), search.suffix.nodes.begin() + 1, search.suffix.nodes.end());

  StitchPlan plan;
  plan.window = s_prime;
  plan.sequence.push_back({pi.owner, lead});
  for (std::size_t t = 1; t < order.size(); ++t) plan.sequence.push_back(flat.items[order[t]]);
  const bool keep = pi.path.length() >= 2 * s_prime;
  if (keep) plan.sequence.push_back(pi);
  const StitchResult r = stitch(plan, view);
  if (trace) {
    trace->add("stitch", {{"procedure", "stitch1"},
                          {"lead", path_json(lead)},
                          {"remainder_kept", keep},
                          {"entries", plan.sequence.size()},
                          {"links", links_json(r.links)},
                          {"failed_at", r.failed_at ? nlohmann::json(*r.failed_at) : nlohmann::json()}});
  }
  return {r.path, r.links};
}

StitchAttempt stitch2(const ViewGraph& view, const SearchResult& search, const Witness& witness,
                      const std::vector<PathSet>& sets, std::size_t s_prime, Trace* trace) {
  const Flat flat = flatten(sets, witness.on);
  const auto order = arrange_alternating(flat.colors, flat.target);
  const StitchEntry& pi = flat.items[flat.target];
  const Path lead = explored_path(search, witness.v);

  StitchPlan plan;
  plan.window = s_prime;
  plan.sequence.push_back(
      {pi.owner, Path{std::vector<NodeId>(pi.path.nodes.begin() + static_cast<long>(witness.head_pos),
                                          pi.path.nodes.end())}});
  for (std::size_t t = 1; t < order.size(); ++t) plan.sequence.push_back(flat.items[order[t]]);
  const StitchResult r = stitch(plan, view);
  StitchAttempt attempt;
  attempt.links.push_back({witness.v, pi.path.nodes[witness.head_pos], lead.length() - 1, witness.head_pos});
  attempt.links.insert(attempt.links.end(), r.links.begin(), r.links.end());
  if (r.path) {
    Path full = lead;
    full.nodes.insert(full.nodes.end(), r.path->nodes.begin(), r.path->nodes.end());
    attempt.path = std::move(full);
  }
  if (trace) {
    trace->add("stitch", {{"procedure", "stitch2"},
                          {"lead", path_json(lead)},
                          {"entries", plan.sequence.size()},
                          {"links", links_json(attempt.links)},
                          {"failed_at", r.failed_at ? nlohmann::json(*r.failed_at) : nlohmann::json()}});
  }
  return attempt;
}

MechanismOutcome run_mechanism_avg(const ViewGraph& view, std::size_t s, const MechanismConfig& config) {
  MechanismOutcome out;
  const HospitalId a = view.altruist_owner();
  const std::size_t n = view.reported_count();
  const auto params = MechParamsAvg::derive(s, config.divisor.evaluate(n));
  out.trace.add("params", {{"mechanism", "avg"},
                           {"n", n},
                           {"s", params.s},
                           {"s_prime", params.s_prime},
                           {"f", params.f_value}});
  AvgRunDetails details;
  details.params = params;
  const std::size_t sp = params.s_prime;

  auto finish = [&](OutcomeStatus status, Path path, ReturnPoint point) {
    out.status = status;
    out.path = std::move(path);
    out.returned_at = point;
    out.trace.add("return", {{"status", to_string(status)}, {"at", to_string(point)}, {"path", path_json(out.path)}});
    out.avg_details = std::move(details);
    const std::string defect = path_defect(out.path, view);
    if (!defect.empty()) throw InvariantViolation("mechanism returned an invalid path: " + defect);
    return out;
  };
  auto ir_path = [&] { return pi_ir(view, config.limits).path; };

  if (n < config.min_n) return finish(OutcomeStatus::kFailure, ir_path(), ReturnPoint::kBelowMinN);

  const auto hospitals = view.hospital_count();
  std::map<HospitalId, std::size_t> counts;
  std::vector<bool> active(hospitals, false);
  for (std::size_t h = 0; h < hospitals; ++h) {
    const auto id = static_cast<HospitalId>(h);
    counts[id] = count_paths(view, id, s, params.f_value, config.limits);
    details.counts.push_back(counts[id]);
    active[h] = counts[id] > 0;
  }
  out.trace.add("counts", {{"paths", details.counts}});
  const auto active_count = static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
  if (!active[static_cast<std::size_t>(a)] || active_count == 1) {
    return finish(OutcomeStatus::kSuccess, ir_path(), ReturnPoint::kIrOnly);
  }

  const auto capped = cap_special(counts);
  for (const auto& [h, c] : capped) {
    details.capped.push_back(c);
    if (c != counts.at(h)) details.special = h;
  }
  if (!details.special) {
    details.special = std::max_element(counts.begin(), counts.end(), [](const auto& x, const auto& y) {
                        return x.second < y.second;
                      })->first;
  }
  out.trace.add("special", {{"hospital", *details.special}, {"capped", details.capped}});

  std::vector<PathSet> sets;
  for (std::size_t h = 0; h < hospitals; ++h) {
    const auto id = static_cast<HospitalId>(h);
    sets.push_back(active[h] ? select_paths_max_total(view, id, details.capped[h], config.limits) : PathSet{id, {}});
    out.trace.add("pathset", {{"stage", "max_total"}, {"set", pathset_json(sets.back())}});
  }
  details.reached_selection = true;
  details.selected = sets;

  NormalizeResult norm = normalize_pathsets(std::move(sets), details.capped, sp);
  if (norm.degenerate) {
    out.trace.add("degenerate", {{"reason", norm.reason}});
    return finish(OutcomeStatus::kFailure, ir_path(), ReturnPoint::kDegenerateNormalization);
  }
  sets = std::move(norm.sets);
  for (std::size_t h = 0; h < hospitals; ++h) {
    if (sets[h].count() != details.capped[h]) throw InvariantViolation("normalized path count mismatch");
    for (const auto& p : sets[h].paths) {
      if (p.length() < 4 * sp) throw InvariantViolation("normalized path shorter than 4 s'");
    }
    out.trace.add("pathset", {{"stage", "normalized"}, {"set", pathset_json(sets[h])}});
  }
  details.normalized = sets;

  SearchResult search = graph_search(view, sets, active, sp);
  details.explored = search.explored;
  details.exp_sizes = search.exp_sizes;
  details.max_exp = search.exp_sizes.empty() ? 0 : *std::max_element(search.exp_sizes.begin(), search.exp_sizes.end());
  static constexpr const char* kKinds[] = {"found", "saturated", "exhausted"};
  out.trace.add("search", {{"result", kKinds[static_cast<int>(search.kind)]},
                           {"explored", search.explored},
                           {"sizes", search.exp_sizes}});
  if (details.max_exp > 2 * sp) throw InvariantViolation("explored set exceeded 2 s'");
  for (const auto& set : sets) {
    for (const auto& p : set.paths) {
      if (search.kind != SearchResult::Kind::kFound && p.length() < 2 * sp) {
        throw InvariantViolation("path dropped below 2 s' during search");
      }
    }
  }

  if (search.kind == SearchResult::Kind::kFound) {
    auto attempt = stitch1(view, search, sets, sp, &out.trace);
    details.links = attempt.links;
    details.stitch_count = attempt.links.size();
    if (attempt.path) return finish(OutcomeStatus::kSuccess, *attempt.path, ReturnPoint::kStitch1Success);
    return finish(OutcomeStatus::kFailure, ir_path(), ReturnPoint::kStitch1Failure);
  }
  if (search.explored.size() < sp) {
    return finish(OutcomeStatus::kSuccess, ir_path(), ReturnPoint::kSmallExploration);
  }
  const auto witness = find_witness(view, search, sets, sp);
  if (!witness) return finish(OutcomeStatus::kFailure, ir_path(), ReturnPoint::kNoWitness);
  out.trace.add("witness", {{"v", witness->v},
                            {"hospital", witness->on.hospital},
                            {"index", witness->on.index},
                            {"head_pos", witness->head_pos}});
  auto attempt = stitch2(view, search, *witness, sets, sp, &out.trace);
  details.links = attempt.links;
  details.stitch_count = attempt.links.size();
  if (attempt.path) return finish(OutcomeStatus::kSuccess, *attempt.path, ReturnPoint::kStitch2Success);
  return finish(OutcomeStatus::kFailure, ir_path(), ReturnPoint::kStitch2Failure);
}

std::vector<std::size_t> pathset_loss(const AvgRunDetails& details, const Path& path) {
  std::vector<char> on_path;
  for (NodeId v : path.nodes) {
    if (static_cast<std::size_t>(v) >= on_path.size()) on_path.resize(static_cast<std::size_t>(v) + 1, 0);
    on_path[static_cast<std::size_t>(v)] = 1;
  }
  std::vector<std::size_t> loss;
  for (const auto& set : details.selected) {
    std::size_t missing = 0;
    for (const auto& p : set.paths) {
      for (NodeId v : p.nodes) {
        if (static_cast<std::size_t>(v) >= on_path.size() || !on_path[static_cast<std::size_t>(v)]) ++missing;
      }
    }
    loss.push_back(missing);
  }
  return loss;
}

}  // namespace kxchain
