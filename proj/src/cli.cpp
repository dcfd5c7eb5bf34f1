#include "kxchain/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kxchain/benchmarks.hpp"
#include "kxchain/digest.hpp"
#include "kxchain/errors.hpp"
#include "kxchain/incentives.hpp"
#include "kxchain/instance_io.hpp"
#include "kxchain/instances.hpp"

namespace kxchain {

namespace {

using nlohmann::json;

struct Common {
  std::optional<std::size_t> fixed_f;
  std::size_t min_n = 1;
  std::optional<std::size_t> exact_limit;
  std::string out_path;

  SearchLimits limits() const {
    SearchLimits l = SearchLimits::from_environment();
    if (exact_limit) l.max_search_nodes = *exact_limit;
    return l;
  }
  MechanismConfig mechanism_config() const {
    MechanismConfig c;
    if (fixed_f) c.divisor = DivisorPolicy::constant(*fixed_f);
    c.min_n = min_n;
    c.limits = limits();
    return c;
  }
  json to_json() const {
    return {{"f", fixed_f ? json(*fixed_f) : json("log")},
            {"min_n", min_n},
            {"exact_limit", limits().max_search_nodes},
            {"packing_limit", limits().max_packing_component}};
  }
};

void add_common(CLI::App* cmd, Common& c, bool mechanism_flags) {
  if (mechanism_flags) {
    cmd->add_option("--f", c.fixed_f, "Fixed divisor f instead of max(2, floor(ln n))")->check(CLI::PositiveNumber);
    cmd->add_option("--min-n", c.min_n, "Fail immediately on views with fewer reported nodes (default 1: off)");
  }
  cmd->add_option("--exact-limit", c.exact_limit,
                  "Exact-search node budget (default: KXCHAIN_EXACT_LIMIT or 24)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out_path, "Output file (default: standard output)");
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string q = "\"";
  for (char ch : text) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) row += ',';
    row += csv_field(fields[i]);
  }
  return row + "\r\n";
}

std::string fixed6(double value) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << value;
  return os.str();
}

struct Loaded {
  GeneratedInstance generated;
  std::string digest;
};

Loaded load(const std::string& path) {
  Loaded l{read_instance_file(path), {}};
  l.digest = sha256_hex(instance_to_json(l.generated).dump());
  return l;
}

json config_json(const std::string& command, json fields, const Common& common) {
  fields["command"] = command;
  fields["options"] = common.to_json();
  return fields;
}

std::size_t parse_size(const std::string& text) {
  std::size_t pos = 0;
  const unsigned long long v = std::stoull(text, &pos);
  if (pos != text.size()) throw PreconditionViolated("bad number '" + text + "'");
  return static_cast<std::size_t>(v);
}

// "60,60;40" -> {{60, 60}, {40}}
std::vector<std::vector<std::size_t>> parse_chains(const std::string& text) {
  std::vector<std::vector<std::size_t>> out;
  std::stringstream hospitals(text);
  std::string hospital;
  while (std::getline(hospitals, hospital, ';')) {
    std::vector<std::size_t> lengths;
    std::stringstream parts(hospital);
    std::string part;
    while (std::getline(parts, part, ',')) lengths.push_back(parse_size(part));
    out.push_back(lengths);
  }
  if (out.empty()) throw PreconditionViolated("empty chain specification");
  return out;
}

json outcome_json(const MechanismOutcome& outcome, const Instance& instance, bool with_trace) {
  json j = {{"status", to_string(outcome.status)},
            {"returned_at", to_string(outcome.returned_at)},
            {"path", path_json(outcome.path)},
            {"welfare", welfare(outcome.path)},
            {"utilities", utilities(outcome.path, instance)},
            {"trace_digest", outcome.trace.digest()},
            {"trace_length", outcome.trace.size()}};
  if (outcome.avg_details) {
    j["search_trace_length"] = outcome.avg_details->exp_sizes.size();
    j["max_explored"] = outcome.avg_details->max_exp;
    j["stitch_count"] = outcome.avg_details->stitch_count;
  }
  if (outcome.s_details) j["stitch_count"] = outcome.s_details->links.size();
  if (with_trace) j["trace"] = outcome.trace.to_json();
  return j;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw std::ios_base::failure("cannot write " + path);
    }
    stream_ = file_.is_open() ? static_cast<std::ostream*>(&file_) : &fallback;
  }
  std::ostream& operator*() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw std::ios_base::failure("write failed");
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Altruist-initiated donation chain simulator", "kxchain"};
  app.require_subcommand(1);

  // generate
  Common gen_common;
  std::string family;
  std::size_t k = 1;
  bool no_x = false;
  bool no_squares = false;
  std::string p_text = "0";
  std::string chains_text;
  std::uint64_t fuzz_seed = 0;
  std::size_t fuzz_max_n = 10;
  std::optional<double> internal_density;
  std::optional<double> cross_density;
  auto* generate = app.add_subcommand("generate", "Generate an instance with certificates");
  generate->add_option("--family", family, "worst-ir | semirandom-ir | worst-ic | semirandom-ic | fuzz | chains")
      ->required()
      ->check(CLI::IsMember({"worst-ir", "semirandom-ir", "worst-ic", "semirandom-ic", "fuzz", "chains"}));
  generate->add_option("--k", k, "Family size parameter")->check(CLI::PositiveNumber);
  generate->add_flag("--exclude-x", no_x, "worst-ic: drop node x");
  generate->add_flag("--no-squares", no_squares, "semirandom-ic: drop the square nodes");
  generate->add_option("--p", p_text, "Random cross-edge probability as a decimal string");
  generate->add_option("--chains", chains_text, "chains/fuzz: lengths per hospital, e.g. 60,60;40");
  generate->add_option("--seed", fuzz_seed, "fuzz: generator seed");
  generate->add_option("--max-n", fuzz_max_n, "fuzz: node budget when --chains is absent");
  generate->add_option("--internal-density", internal_density, "fuzz: extra internal edge probability");
  generate->add_option("--cross-density", cross_density, "fuzz: adversarial cross edge probability");
  add_common(generate, gen_common, false);

  // run
  Common run_common;
  std::string run_mech;
  std::string run_instance;
  std::size_t run_s = 0;
  std::uint64_t run_seed = 0;
  bool run_trace = false;
  auto* run = app.add_subcommand("run", "Run a mechanism on one realization");
  run->add_option("--mechanism", run_mech, "s | avg | naive")->required()->check(CLI::IsMember({"s", "avg", "naive"}));
  run->add_option("--s", run_s, "Segment parameter s")->required()->check(CLI::PositiveNumber);
  run->add_option("--seed", run_seed, "Random-edge seed")->required();
  run->add_option("--instance", run_instance, "Instance JSON file")->required();
  run->add_flag("--trace", run_trace, "Include the full trace");
  add_common(run, run_common, true);

  // bench
  Common bench_common;
  std::string bench_kind = "all";
  std::string bench_instance;
  std::optional<std::size_t> bench_s;
  std::uint64_t bench_seed = 0;
  bool no_timing = false;
  auto* bench = app.add_subcommand("bench", "Compute exact benchmarks");
  bench->add_option("--kind", bench_kind, "opt | sopt | avgopt | pi_ir | all")
      ->check(CLI::IsMember({"opt", "sopt", "avgopt", "pi_ir", "all"}));
  bench->add_option("--s", bench_s, "Segment parameter for sopt and avgopt")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_seed, "Random-edge seed");
  bench->add_option("--instance", bench_instance, "Instance JSON file")->required();
  bench->add_flag("--no-timing", no_timing, "Write 0 in runtime_ms so output is reproducible");
  add_common(bench, bench_common, false);

  // audit
  Common audit_common;
  std::string audit_mech;
  std::string audit_instance;
  std::size_t audit_s = 0;
  std::uint64_t audit_seed = 0;
  bool audit_exhaustive = false;
  std::optional<std::size_t> audit_samples;
  std::optional<HospitalId> audit_hospital;
  bool audit_no_diversion = false;
  auto* audit = app.add_subcommand("audit", "Audit hiding and diversion incentives");
  audit->add_option("--mechanism", audit_mech, "s | avg | naive")->required()->check(CLI::IsMember({"s", "avg", "naive"}));
  audit->add_option("--s", audit_s, "Segment parameter s")->required()->check(CLI::PositiveNumber);
  audit->add_option("--seed", audit_seed, "Random-edge seed")->required();
  audit->add_option("--instance", audit_instance, "Instance JSON file")->required();
  auto* ex = audit->add_flag("--exhaustive", audit_exhaustive, "Enumerate every hiding subset");
  audit->add_option("--samples", audit_samples, "Sampled hiding subsets for large hospitals")->excludes(ex);
  audit->add_option("--hospital", audit_hospital, "Audit only this hospital");
  audit->add_flag("--no-diversion", audit_no_diversion, "Hiding only");
  add_common(audit, audit_common, true);

  // montecarlo
  Common mc_common;
  std::string mc_mech;
  std::string mc_instance;
  std::size_t mc_s = 0;
  std::size_t mc_trials = 1;
  std::uint64_t mc_seed = 0;
  std::optional<std::size_t> mc_benchmark;
  std::string mc_jsonl;
  auto* mc = app.add_subcommand("montecarlo", "Run a mechanism over many seeds");
  mc->add_option("--mechanism", mc_mech, "s | avg | naive")->required()->check(CLI::IsMember({"s", "avg", "naive"}));
  mc->add_option("--s", mc_s, "Segment parameter s")->required()->check(CLI::PositiveNumber);
  mc->add_option("--trials", mc_trials, "Number of seeds")->check(CLI::PositiveNumber);
  mc->add_option("--seed", mc_seed, "First seed");
  mc->add_option("--instance", mc_instance, "Instance JSON file")->required();
  mc->add_option("--benchmark", mc_benchmark, "Benchmark length for welfare_ratio");
  mc->add_option("--jsonl", mc_jsonl, "Write one JSON record per trial to this file");
  add_common(mc, mc_common, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto selected = app.get_subcommands();
    out << (selected.empty() ? app.help("", CLI::AppFormatMode::All) : selected.front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (generate->parsed()) {
      const auto p = Probability::parse(p_text);
      SearchLimits limits = gen_common.limits();
      GeneratedInstance g;
      if (family == "worst-ir") g = gen_worst_case_ir(k, p, limits);
      if (family == "semirandom-ir") g = gen_semirandom_ir(k, p, limits);
      if (family == "worst-ic") g = gen_worst_case_ic(k, !no_x, p, limits);
      if (family == "semirandom-ic") g = gen_semirandom_ic(k, !no_squares, p, limits);
      if (family == "chains") {
        if (chains_text.empty()) throw PreconditionViolated("--chains is required for the chains family");
        g = gen_chains(parse_chains(chains_text), p);
      }
      if (family == "fuzz") {
        FuzzConfig config = random_fuzz_config(fuzz_seed, fuzz_max_n);
        if (!chains_text.empty()) config.chains = parse_chains(chains_text);
        if (internal_density) config.internal_density = *internal_density;
        if (cross_density) config.cross_density = *cross_density;
        if (generate->count("--p")) config.p = p;
        g.instance = std::make_shared<const Instance>(gen_random_fuzz(config, fuzz_seed));
        g.family = "fuzz";
        g.params = {{"seed", fuzz_seed}, {"chains", config.chains}, {"internal_density", config.internal_density},
                    {"cross_density", config.cross_density}, {"p", config.p.text()}};
      }
      Output o(gen_common.out_path, out);
      *o << instance_to_json(g).dump(2) << '\n';
      o.finish();
      return kExitOk;
    }

    if (run->parsed()) {
      const Loaded l = load(run_instance);
      const json config = config_json(
          "run", {{"mechanism", run_mech}, {"s", run_s}, {"seed", run_seed}, {"instance_digest", l.digest}},
          run_common);
      const CompatibilityGraph graph = sample_random_edges(l.generated.instance, run_seed);
      const auto outcome =
          run_mechanism(parse_mechanism_kind(run_mech), full_view(graph), run_s, run_common.mechanism_config());
      json record = outcome_json(outcome, *l.generated.instance, run_trace);
      record["config"] = config;
      record["config_digest"] = sha256_hex(config.dump());
      record["seed"] = run_seed;
      Output o(run_common.out_path, out);
      *o << record.dump() << '\n';
      o.finish();
      return kExitOk;
    }

    if (bench->parsed()) {
      const Loaded l = load(bench_instance);
      const json config = config_json("bench",
                                      {{"kind", bench_kind},
                                       {"s", bench_s ? json(*bench_s) : json()},
                                       {"seed", bench_seed},
                                       {"instance_digest", l.digest},
                                       {"timing", !no_timing}},
                                      bench_common);
      const std::string digest = sha256_hex(config.dump());
      const CompatibilityGraph graph = sample_random_edges(l.generated.instance, bench_seed);
      const ViewGraph view = full_view(graph);
      std::vector<BenchmarkKind> kinds;
      if (bench_kind == "all") {
        kinds = {BenchmarkKind::kOpt, BenchmarkKind::kSOpt, BenchmarkKind::kAvgOpt, BenchmarkKind::kPiIR};
      } else {
        kinds = {parse_benchmark_kind(bench_kind)};
      }
      std::string text = csv_row({"kind", "s", "length", "certified", "runtime_ms", "config_digest", "seed"});
      for (auto kind : kinds) {
        const bool needs_s = kind == BenchmarkKind::kSOpt || kind == BenchmarkKind::kAvgOpt;
        if (needs_s && !bench_s) throw PreconditionViolated("--s is required for sopt and avgopt");
        const auto start = std::chrono::steady_clock::now();
        const auto r = compute_benchmark(view, kind, needs_s ? *bench_s : 1, bench_common.limits());
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        text += csv_row({std::string(to_string(kind)), needs_s ? std::to_string(*bench_s) : "",
                         std::to_string(r.length()), r.certified ? "true" : "false", no_timing ? "0" : fixed6(ms),
                         digest, std::to_string(bench_seed)});
      }
      Output o(bench_common.out_path, out);
      *o << text;
      o.finish();
      return kExitOk;
    }

    if (audit->parsed()) {
      const Loaded l = load(audit_instance);
      SubsetPolicy policy;
      policy.force_exhaustive = audit_exhaustive;
      if (audit_samples) policy.samples = *audit_samples;
      policy.sample_seed = audit_seed;
      policy.diversions = !audit_no_diversion;
      const json config = config_json("audit",
                                      {{"mechanism", audit_mech},
                                       {"s", audit_s},
                                       {"seed", audit_seed},
                                       {"instance_digest", l.digest},
                                       {"exhaustive", audit_exhaustive},
                                       {"samples", policy.samples},
                                       {"hospital", audit_hospital ? json(*audit_hospital) : json()},
                                       {"diversions", policy.diversions}},
                                      audit_common);
      const std::string digest = sha256_hex(config.dump());
      const CompatibilityGraph graph = sample_random_edges(l.generated.instance, audit_seed);
      const auto kind = parse_mechanism_kind(audit_mech);
      const auto mconfig = audit_common.mechanism_config();
      const auto truthful = run_mechanism(kind, full_view(graph), audit_s, mconfig);
      std::string text = csv_row({"hospital", "truthful_utility", "best_utility", "gap_ratio", "witness_hidden_count",
                                  "witness_divert_node", "config_digest", "seed"});
      for (std::size_t h = 0; h < l.generated.instance->hospital_count(); ++h) {
        if (audit_hospital && static_cast<std::size_t>(*audit_hospital) != h) continue;
        const auto a = audit_hiding(kind, graph, static_cast<HospitalId>(h), audit_s, mconfig, policy, &truthful);
        text += csv_row({std::to_string(h), std::to_string(a.truthful_utility), std::to_string(a.best_utility),
                         fixed6(a.gap_ratio), std::to_string(a.witness.hidden.size()),
                         a.witness.diversion ? std::to_string(a.witness.diversion->node) : "", digest,
                         std::to_string(audit_seed)});
      }
      Output o(audit_common.out_path, out);
      *o << text;
      o.finish();
      return kExitOk;
    }

    if (mc->parsed()) {
      const Loaded l = load(mc_instance);
      const json config = config_json("montecarlo",
                                      {{"mechanism", mc_mech},
                                       {"s", mc_s},
                                       {"trials", mc_trials},
                                       {"seed", mc_seed},
                                       {"instance_digest", l.digest},
                                       {"benchmark", mc_benchmark ? json(*mc_benchmark) : json()}},
                                      mc_common);
      const std::string digest = sha256_hex(config.dump());
      std::vector<TrialRecord> records;
      const auto summary = monte_carlo(parse_mechanism_kind(mc_mech), l.generated.instance, mc_s, mc_trials, mc_seed,
                                       mc_common.mechanism_config(), mc_benchmark, &records);
      if (!mc_jsonl.empty()) {
        Output lines(mc_jsonl, out);
        for (const auto& r : records) {
          json rec = outcome_json(r.outcome, *l.generated.instance, false);
          rec["config_digest"] = digest;
          rec["seed"] = r.seed;
          *lines << rec.dump() << '\n';
        }
        lines.finish();
      }
      json record = {{"config", config},
                     {"config_digest", digest},
                     {"seed", mc_seed},
                     {"trials", summary.trials},
                     {"successes", summary.successes},
                     {"success_rate", summary.success_rate},
                     {"mean_welfare", summary.mean_welfare},
                     {"welfare_ratio", summary.welfare_ratio ? json(*summary.welfare_ratio) : json()},
                     {"mean_utility", summary.mean_utility}};
      Output o(mc_common.out_path, out);
      *o << record.dump() << '\n';
      o.finish();
      return kExitOk;
    }
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const ResourceBudgetExceeded& e) {
    err << "resource budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const InvalidInstance& e) {
    err << "invalid instance: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionViolated& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace kxchain
