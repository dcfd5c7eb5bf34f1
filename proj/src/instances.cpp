#include "kxchain/instances.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "kxchain/benchmarks.hpp"
#include "kxchain/errors.hpp"

namespace kxchain {

std::string_view to_string(CertificateStatus status) {
  return status == CertificateStatus::kVerified ? "verified" : "constructed";
}

const Certificate* GeneratedInstance::find(std::string_view name) const {
  for (const auto& c : certificates) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

struct Builder {
  std::vector<HospitalId> owners;
  std::vector<Edge> edges;

  NodeId add(HospitalId h) {
    owners.push_back(h);
    return static_cast<NodeId>(owners.size() - 1);
  }
  std::vector<NodeId> chain(HospitalId h, std::size_t length) {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < length; ++i) {
      out.push_back(add(h));
      if (i > 0) link(out[i - 1], out[i]);
    }
    return out;
  }
  void link(NodeId u, NodeId v) { edges.push_back({u, v}); }

  std::shared_ptr<const Instance> build(NodeId altruist, const Probability& p) {
    return std::make_shared<const Instance>(owners.size(), owners, edges, altruist, p);
  }
};

// Visits every simple path from the altruist of the base graph.
void for_each_path(const ViewGraph& view, const SearchLimits& limits, const std::function<void(const Path&)>& visit) {
  detail::check_region(view, view.altruist(), [&](NodeId v) { return view.contains(v); }, limits);
  std::vector<char> used(view.node_count(), 0);
  Path path;
  std::function<void(NodeId)> go = [&](NodeId v) {
    used[static_cast<std::size_t>(v)] = 1;
    path.nodes.push_back(v);
    visit(path);
    for (NodeId w : view.successors(v)) {
      if (!used[static_cast<std::size_t>(w)]) go(w);
    }
    path.nodes.pop_back();
    used[static_cast<std::size_t>(v)] = 0;
  };
  go(view.altruist());
}

class Verifier {
 public:
  Verifier(GeneratedInstance& gen, const SearchLimits& limits)
      : gen_(gen),
        limits_(limits),
        base_(std::make_shared<const Instance>(gen.instance->with_probability(Probability{}))),
        graph_(sample_random_edges(base_, 0)),
        view_(full_view(graph_)) {}

  void claim(std::string name, std::string relation, std::size_t value, std::optional<std::size_t> s,
             const std::function<std::size_t(const ViewGraph&, const SearchLimits&)>& measure) {
    Certificate c{std::move(name), std::move(relation), value, s, CertificateStatus::kConstructed};
    try {
      const std::size_t got = measure(view_, limits_);
      const bool ok = c.relation == "eq" ? got == value : c.relation == "ge" ? got >= value : got <= value;
      if (!ok) {
        throw InvariantViolation(gen_.family + " certificate " + c.name + " claims " + c.relation + " " +
                                 std::to_string(value) + " but the oracle measured " + std::to_string(got));
      }
      c.status = CertificateStatus::kVerified;
    } catch (const ResourceBudgetExceeded&) {
    }
    gen_.certificates.push_back(std::move(c));
  }

 private:
  GeneratedInstance& gen_;
  SearchLimits limits_;
  std::shared_ptr<const Instance> base_;
  CompatibilityGraph graph_;
  ViewGraph view_;
};

void require_k(std::size_t k) {
  if (k == 0) throw PreconditionViolated("family parameter k must be at least 1");
}

}  // namespace

GeneratedInstance gen_worst_case_ir(std::size_t k, const Probability& p, const SearchLimits& limits) {
  require_k(k);
  Builder b;
  const auto own = b.chain(0, 2 * k);
  const auto other = b.chain(1, 2 * k);
  b.link(own[k - 1], other[0]);
  GeneratedInstance gen{b.build(own[0], p), "worst-ir", {{"k", k}, {"p", p.text()}}, {}};
  Verifier v(gen, limits);
  v.claim("sopt", "eq", 3 * k, k, [k](const ViewGraph& g, const SearchLimits& l) { return sopt(g, k, l).length(); });
  v.claim("pi_ir", "eq", 2 * k, std::nullopt,
          [](const ViewGraph& g, const SearchLimits& l) { return pi_ir(g, l).length(); });
  v.claim("owner_utility_beyond_internal", "le", k, std::nullopt, [k](const ViewGraph& g, const SearchLimits& l) {
    std::size_t worst = 0;
    for_each_path(g, l, [&](const Path& path) {
      if (path.length() > 2 * k) worst = std::max(worst, utility(path, 0, g.instance()));
    });
    return worst;
  });
  return gen;
}

GeneratedInstance gen_semirandom_ir(std::size_t k, const Probability& p, const SearchLimits& limits) {
  require_k(k);
  Builder b;
  const NodeId alpha = b.add(0);
  std::vector<NodeId> upper_tail;
  std::vector<NodeId> lower_tail;
  NodeId prev = alpha;
  for (std::size_t blk = 0; blk < k; ++blk) {
    const NodeId entry = b.add(0);
    if (blk == 0) {
      b.link(prev, entry);
    } else {
      b.link(upper_tail.back(), entry);
      b.link(lower_tail.back(), entry);
    }
    const NodeId u1 = b.add(0);
    const NodeId u2 = b.add(0);
    const NodeId l1 = b.add(1);
    const NodeId l2 = b.add(1);
    const NodeId l3 = b.add(1);
    b.link(entry, u1);
    b.link(u1, u2);
    b.link(entry, l1);
    b.link(l1, l2);
    b.link(l2, l3);
    upper_tail = {u2};
    lower_tail = {l3};
    prev = entry;
  }
  const auto c = b.chain(1, k);
  const auto d = b.chain(0, k);
  b.link(upper_tail.back(), c.front());
  b.link(lower_tail.back(), c.front());
  b.link(c.back(), d.front());
  GeneratedInstance gen{b.build(alpha, p), "semirandom-ir", {{"k", k}, {"p", p.text()}}, {}};
  Verifier v(gen, limits);
  v.claim("opt", "eq", 6 * k + 1, std::nullopt,
          [](const ViewGraph& g, const SearchLimits& l) { return opt(g, l).length(); });
  v.claim("pi_ir", "eq", 3 * k + 1, std::nullopt,
          [](const ViewGraph& g, const SearchLimits& l) { return pi_ir(g, l).length(); });
  return gen;
}

GeneratedInstance gen_worst_case_ic(std::size_t k, bool include_x, const Probability& p, const SearchLimits& limits) {
  require_k(k);
  Builder b;
  const auto own = b.chain(0, 3 * k);
  if (include_x) {
    const NodeId x = b.add(0);
    const auto other = b.chain(1, 3 * k - 1);
    b.link(own[k - 1], x);
    b.link(x, other.front());
  } else {
    b.chain(1, 3 * k - 1);
  }
  GeneratedInstance gen{
      b.build(own[0], p), "worst-ic", {{"k", k}, {"include_x", include_x}, {"p", p.text()}}, {}};
  Verifier v(gen, limits);
  v.claim("sopt", "eq", include_x ? 4 * k : 3 * k, k,
          [k](const ViewGraph& g, const SearchLimits& l) { return sopt(g, k, l).length(); });
  if (include_x) {
    // Every path holding at least 2k foreign nodes gives the owner exactly k+1.
    v.claim("owner_utility_with_foreign_majority", "eq", k + 1, std::nullopt,
            [k](const ViewGraph& g, const SearchLimits& l) {
              std::optional<std::size_t> lo;
              std::optional<std::size_t> hi;
              for_each_path(g, l, [&](const Path& path) {
                if (utility(path, 1, g.instance()) < 2 * k) return;
                const std::size_t u = utility(path, 0, g.instance());
                lo = lo ? std::min(*lo, u) : u;
                hi = hi ? std::max(*hi, u) : u;
              });
              return lo && lo == hi ? *lo : 0;
            });
  } else {
    v.claim("pi_ir", "ge", 2 * k + 1, std::nullopt,
            [](const ViewGraph& g, const SearchLimits& l) { return pi_ir(g, l).length(); });
  }
  return gen;
}

GeneratedInstance gen_semirandom_ic(std::size_t k, bool include_squares, const Probability& p,
                                    const SearchLimits& limits) {
  require_k(k);
  Builder b;
  std::vector<NodeId> entries;
  for (std::size_t blk = 0; blk < k; ++blk) entries.push_back(b.add(0));
  for (std::size_t blk = 0; blk < k; ++blk) {
    const NodeId u1 = b.add(0);
    const NodeId u2 = b.add(0);
    b.link(entries[blk], u1);
    b.link(u1, u2);
    if (blk + 1 < k) b.link(u2, entries[blk + 1]);
  }
  for (std::size_t blk = 0; blk < k; ++blk) {
    std::optional<NodeId> square;
    if (include_squares) square = b.add(0);
    const NodeId w1 = b.add(1);
    const NodeId w2 = b.add(1);
    if (square) {
      b.link(entries[blk], *square);
      b.link(*square, w1);
    }
    b.link(w1, w2);
    if (blk + 1 < k) b.link(w2, entries[blk + 1]);
  }
  GeneratedInstance gen{b.build(entries[0], p),
                        "semirandom-ic",
                        {{"k", k}, {"include_squares", include_squares}, {"p", p.text()}},
                        {}};
  Verifier v(gen, limits);
  if (include_squares) {
    v.claim("opt", "ge", 4 * k, std::nullopt,
            [](const ViewGraph& g, const SearchLimits& l) { return opt(g, l).length(); });
  } else {
    v.claim("opt_foreign_utility", "eq", 0, std::nullopt, [](const ViewGraph& g, const SearchLimits& l) {
      return utility(opt(g, l).path, 1, g.instance());
    });
  }
  return gen;
}

GeneratedInstance gen_chains(const std::vector<std::vector<std::size_t>>& chains, const Probability& p) {
  if (chains.empty() || chains[0].empty() || chains[0][0] == 0) {
    throw PreconditionViolated("hospital 0 needs a nonempty first chain");
  }
  Builder b;
  NodeId alpha = -1;
  for (std::size_t h = 0; h < chains.size(); ++h) {
    if (chains[h].empty()) throw PreconditionViolated("every hospital needs at least one chain");
    for (std::size_t len : chains[h]) {
      if (len == 0) throw PreconditionViolated("chain lengths must be positive");
      const auto c = b.chain(static_cast<HospitalId>(h), len);
      if (alpha < 0) alpha = c.front();
    }
  }
  GeneratedInstance gen{b.build(alpha, p), "chains", {{"chains", chains}, {"p", p.text()}}, {}};
  gen.certificates.push_back(
      {"sopt_upper_bound", "le", gen.instance->node_count(), std::nullopt, CertificateStatus::kConstructed});
  return gen;
}

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t below(std::mt19937_64& rng, std::size_t bound) { return static_cast<std::size_t>(rng() % bound); }

}  // namespace

Instance gen_random_fuzz(const FuzzConfig& config, std::uint64_t seed) {
  if (config.chains.empty()) throw PreconditionViolated("fuzz config needs at least one hospital");
  std::mt19937_64 rng(seed);
  std::vector<HospitalId> owners;
  std::vector<std::vector<NodeId>> members(config.chains.size());
  for (std::size_t h = 0; h < config.chains.size(); ++h) {
    std::size_t total = 0;
    for (std::size_t len : config.chains[h]) total += len;
    if (total == 0 || config.chains[h].front() == 0) throw PreconditionViolated("fuzz hospitals need nodes");
    for (std::size_t i = 0; i < total; ++i) {
      members[h].push_back(static_cast<NodeId>(owners.size()));
      owners.push_back(static_cast<HospitalId>(h));
    }
  }
  std::vector<Edge> edges;
  NodeId alpha = -1;
  for (std::size_t h = 0; h < config.chains.size(); ++h) {
    auto nodes = members[h];
    for (std::size_t i = nodes.size(); i > 1; --i) std::swap(nodes[i - 1], nodes[below(rng, i)]);
    std::size_t at = 0;
    for (std::size_t len : config.chains[h]) {
      for (std::size_t i = 1; i < len; ++i) edges.push_back({nodes[at + i - 1], nodes[at + i]});
      if (h == 0 && alpha < 0) alpha = nodes[at];
      at += len;
    }
    for (NodeId u : members[h]) {
      for (NodeId v : members[h]) {
        if (u != v && unit(rng) < config.internal_density) edges.push_back({u, v});
      }
    }
  }
  for (std::size_t u = 0; u < owners.size(); ++u) {
    for (std::size_t v = 0; v < owners.size(); ++v) {
      if (owners[u] != owners[v] && unit(rng) < config.cross_density) {
        edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
      }
    }
  }
  return Instance(owners.size(), owners, edges, alpha, config.p);
}

FuzzConfig random_fuzz_config(std::uint64_t seed, std::size_t max_n) {
  if (max_n < 2) throw PreconditionViolated("fuzz instances need at least 2 nodes");
  std::mt19937_64 rng(seed ^ 0x5851F42D4C957F2DULL);
  FuzzConfig config;
  const std::size_t hospitals = max_n >= 6 ? 2 + below(rng, 2) : 2;
  const std::size_t n = std::max(hospitals, max_n / 2 + below(rng, max_n - max_n / 2 + 1));
  std::vector<std::size_t> sizes(hospitals, 1);
  for (std::size_t i = hospitals; i < n; ++i) ++sizes[below(rng, hospitals)];
  for (std::size_t size : sizes) {
    std::vector<std::size_t> chains;
    std::size_t left = size;
    while (left > 0) {
      const std::size_t len = 1 + below(rng, left);
      chains.push_back(len);
      left -= len;
    }
    config.chains.push_back(chains);
  }
  static const char* kProbabilities[] = {"0", "0.1", "0.3", "0.5", "1"};
  config.internal_density = unit(rng) * 0.25;
  config.cross_density = unit(rng) * 0.2;
  config.p = Probability::parse(kProbabilities[below(rng, 5)]);
  return config;
}

}  // namespace kxchain
