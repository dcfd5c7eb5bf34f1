#include "kxchain/incentives.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "kxchain/benchmarks.hpp"
#include "kxchain/errors.hpp"
#include "kxchain/mechanism_avg.hpp"
#include "kxchain/mechanism_s.hpp"

namespace kxchain {

std::string_view to_string(MechanismKind kind) {
  switch (kind) {
    case MechanismKind::kS: return "s";
    case MechanismKind::kAvg: return "avg";
    case MechanismKind::kNaiveOpt: return "naive";
  }
  return "?";
}

MechanismKind parse_mechanism_kind(std::string_view text) {
  if (text == "s") return MechanismKind::kS;
  if (text == "avg") return MechanismKind::kAvg;
  if (text == "naive") return MechanismKind::kNaiveOpt;
  throw PreconditionViolated("unknown mechanism '" + std::string(text) + "'");
}

MechanismOutcome run_mechanism(MechanismKind kind, const ViewGraph& view, std::size_t s,
                               const MechanismConfig& config) {
  switch (kind) {
    case MechanismKind::kS: return run_mechanism_s(view, s, config);
    case MechanismKind::kAvg: return run_mechanism_avg(view, s, config);
    case MechanismKind::kNaiveOpt: {
      MechanismOutcome out;
      const auto best = sopt(view, s, config.limits);
      out.trace.add("params", {{"mechanism", "naive"}, {"s", s}});
      out.returned_at = ReturnPoint::kBaseline;
      if (best.path.empty()) {
        out.status = OutcomeStatus::kFailure;
        out.path = Path{{view.altruist()}};
      } else {
        out.status = OutcomeStatus::kSuccess;
        out.path = best.path;
      }
      out.trace.add("return", {{"status", to_string(out.status)}, {"path", path_json(out.path)}});
      return out;
    }
  }
  throw PreconditionViolated("unknown mechanism");
}

DiversionResult best_diversion(const Path& path, HospitalId hospital, const ViewGraph& full,
                               const SearchLimits& limits) {
  const Instance& instance = full.instance();
  DiversionResult result{utility(path, hospital, instance), std::nullopt, path};
  std::size_t prefix_utility = 0;
  for (std::size_t q = 0; q < path.length(); ++q) {
    const NodeId v = path.nodes[q];
    if (instance.owner(v) == hospital) {
      const std::span<const NodeId> prefix(path.nodes.data(), q);
      Path ext = longest_internal_path_from(full, v, limits, prefix);
      const std::size_t u = prefix_utility + ext.length();
      if (u > result.utility) {
        result.utility = u;
        result.path.nodes.assign(path.nodes.begin(), path.nodes.begin() + static_cast<long>(q));
        result.path.nodes.insert(result.path.nodes.end(), ext.nodes.begin(), ext.nodes.end());
        result.diversion = Diversion{v, std::move(ext)};
      }
      ++prefix_utility;
    }
  }
  return result;
}

namespace {

std::size_t selected_count(const MechanismOutcome& outcome, HospitalId h) {
  if (!outcome.s_details || outcome.s_details->initial_sets.empty()) return 0;
  return outcome.s_details->initial_sets[static_cast<std::size_t>(h)].count();
}

}  // namespace

HospitalAudit audit_hiding(MechanismKind mechanism, const CompatibilityGraph& graph, HospitalId hospital,
                           std::size_t s, const MechanismConfig& config, const SubsetPolicy& policy,
                           const MechanismOutcome* truthful) {
  const Instance& instance = graph.instance();
  const ViewGraph full = full_view(graph);
  MechanismOutcome own;
  if (!truthful) {
    own = run_mechanism(mechanism, full, s, config);
    truthful = &own;
  }
  HospitalAudit audit;
  audit.hospital = hospital;
  audit.truthful_utility = utility(truthful->path, hospital, instance);
  audit.best_hiding_utility = audit.truthful_utility;
  audit.best_utility = audit.truthful_utility;
  audit.witness.hospital = hospital;
  if (mechanism == MechanismKind::kS) {
    audit.truthful_selected = selected_count(*truthful, hospital);
    audit.max_manipulated_selected = 0;
  }

  std::vector<NodeId> candidates;
  for (NodeId v : instance.members(hospital)) {
    if (v != instance.altruist()) candidates.push_back(v);
  }
  audit.exhaustive = policy.force_exhaustive || candidates.size() <= policy.exhaustive_cap;
  if (audit.exhaustive && candidates.size() > 24) {
    throw ResourceBudgetExceeded("exhaustive hiding over " + std::to_string(candidates.size()) + " nodes");
  }

  auto evaluate = [&](const std::vector<NodeId>& hidden) {
    MechanismOutcome outcome;
    if (hidden.empty()) {
      outcome = *truthful;
    } else {
      const ViewGraph view(graph, Report::hiding(instance, hospital, hidden));
      outcome = run_mechanism(mechanism, view, s, config);
    }
    ++audit.subsets_evaluated;
    const std::size_t u_hide = utility(outcome.path, hospital, instance);
    DiversionResult div{u_hide, std::nullopt, outcome.path};
    if (policy.diversions) div = best_diversion(outcome.path, hospital, full, config.limits);
    if (u_hide > audit.best_hiding_utility) audit.best_hiding_utility = u_hide;
    if (div.utility > audit.best_utility) {
      audit.best_utility = div.utility;
      audit.witness = Manipulation{hospital, hidden, div.diversion};
    }
    if (div.utility > audit.truthful_utility) ++audit.manipulations_with_gain;
    if (mechanism == MechanismKind::kS) {
      audit.max_manipulated_selected = std::max(*audit.max_manipulated_selected, selected_count(outcome, hospital));
    }
  };

  if (audit.exhaustive) {
    const std::uint64_t total = std::uint64_t{1} << candidates.size();
    std::vector<NodeId> hidden;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      hidden.clear();
      for (std::size_t b = 0; b < candidates.size(); ++b) {
        if (mask >> b & 1u) hidden.push_back(candidates[b]);
      }
      evaluate(hidden);
    }
  } else {
    std::mt19937_64 rng(policy.sample_seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(hospital + 1)));
    evaluate({});
    std::vector<NodeId> hidden;
    for (std::size_t t = 0; t < policy.samples; ++t) {
      hidden.clear();
      for (NodeId v : candidates) {
        if (rng() >> 63) hidden.push_back(v);
      }
      evaluate(hidden);
    }
  }
  audit.gap_ratio = static_cast<double>(audit.best_utility) / static_cast<double>(std::max<std::size_t>(1, audit.truthful_utility));
  return audit;
}

AuditReport audit_all(MechanismKind mechanism, const CompatibilityGraph& graph, std::size_t s,
                      const MechanismConfig& config, const SubsetPolicy& policy) {
  AuditReport report;
  report.mechanism = mechanism;
  report.seed = graph.seed();
  report.s = s;
  report.truthful = run_mechanism(mechanism, full_view(graph), s, config);
  for (std::size_t h = 0; h < graph.instance().hospital_count(); ++h) {
    report.hospitals.push_back(
        audit_hiding(mechanism, graph, static_cast<HospitalId>(h), s, config, policy, &report.truthful));
  }
  return report;
}

IrCheck ir_check(const MechanismOutcome& outcome, const ViewGraph& full, const SearchLimits& limits) {
  IrCheck check;
  check.pi_ir_length = pi_ir(full, limits).length();
  check.altruist_owner_utility = utility(outcome.path, full.altruist_owner(), full.instance());
  check.deficit = check.pi_ir_length > check.altruist_owner_utility ? check.pi_ir_length - check.altruist_owner_utility : 0;
  return check;
}

std::vector<BoundCheck> lemma_bound_check(const AuditReport& report) {
  std::vector<BoundCheck> out;
  const auto& truthful = report.truthful;
  if (report.mechanism == MechanismKind::kAvg && truthful.avg_details && truthful.avg_details->reached_selection) {
    const auto& d = *truthful.avg_details;
    for (const auto& audit : report.hospitals) {
      const auto h = static_cast<std::size_t>(audit.hospital);
      const std::size_t paths = d.capped[h];
      if (paths == 0) continue;
      const double ell = static_cast<double>(d.selected[h].total_length());
      BoundCheck c;
      c.hospital = audit.hospital;
      c.rule = "avg";
      c.bound = (1.0 + 1.0 / static_cast<double>(paths)) * ell + 2.0 * static_cast<double>(d.params.s_prime);
      c.observed = static_cast<double>(audit.best_utility);
      c.margin = c.bound - c.observed;
      c.pass = c.margin >= 0.0;
      out.push_back(c);
    }
  }
  if (report.mechanism == MechanismKind::kS && truthful.s_details && truthful.returned_at == ReturnPoint::kStitched) {
    const auto& d = *truthful.s_details;
    for (const auto& audit : report.hospitals) {
      const auto h = static_cast<std::size_t>(audit.hospital);
      BoundCheck c;
      c.hospital = audit.hospital;
      if (d.special && *d.special == audit.hospital) {
        c.rule = "s_special";
        c.bound = static_cast<double>(d.final_sets[h].total_length());
      } else {
        c.rule = "s";
        c.bound = static_cast<double>(d.initial_sets[h].count() * d.params.s_prime);
      }
      c.observed = static_cast<double>(audit.best_hiding_utility);
      c.margin = c.bound - c.observed;
      c.pass = c.margin >= 0.0;
      out.push_back(c);
    }
  }
  return out;
}

MonteCarloSummary monte_carlo(MechanismKind mechanism, const std::shared_ptr<const Instance>& instance,
                              std::size_t s, std::size_t trials, std::uint64_t seed0, const MechanismConfig& config,
                              std::optional<std::size_t> benchmark, std::vector<TrialRecord>* records) {
  if (trials == 0) throw PreconditionViolated("monte carlo needs at least one trial");
  MonteCarloSummary summary;
  summary.trials = trials;
  summary.mean_utility.assign(instance->hospital_count(), 0.0);
  double welfare_sum = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t seed = seed0 + t;
    const CompatibilityGraph graph = sample_random_edges(instance, seed);
    MechanismOutcome outcome = run_mechanism(mechanism, full_view(graph), s, config);
    if (outcome.success()) ++summary.successes;
    welfare_sum += static_cast<double>(welfare(outcome.path));
    const auto u = utilities(outcome.path, *instance);
    for (std::size_t h = 0; h < u.size(); ++h) summary.mean_utility[h] += static_cast<double>(u[h]);
    if (records) records->push_back({seed, std::move(outcome)});
  }
  const auto n = static_cast<double>(trials);
  summary.success_rate = static_cast<double>(summary.successes) / n;
  summary.mean_welfare = welfare_sum / n;
  for (auto& u : summary.mean_utility) u /= n;
  if (benchmark && *benchmark > 0) summary.welfare_ratio = summary.mean_welfare / static_cast<double>(*benchmark);
  return summary;
}

}  // namespace kxchain
