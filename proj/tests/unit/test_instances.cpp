#include <gtest/gtest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "kxchain/benchmarks.hpp"
#include "kxchain/errors.hpp"
#include "kxchain/instance_io.hpp"
#include "kxchain/instances.hpp"
#include "oracle.hpp"

using namespace kxchain;

namespace {

ViewGraph base_view(const GeneratedInstance& g) { return full_view(sample_random_edges(g.instance, 0)); }

std::size_t best_owner_utility_on_long_paths(const ViewGraph& view, std::size_t longer_than) {
  std::size_t best = 0;
  for (const auto& p : oracle::all_paths_from(view, view.altruist())) {
    if (p.length() > longer_than) best = std::max(best, utility(p, 0, view.instance()));
  }
  return best;
}

void expect_all_verified(const GeneratedInstance& g) {
  EXPECT_FALSE(g.certificates.empty());
  for (const auto& c : g.certificates) {
    EXPECT_EQ(c.status, CertificateStatus::kVerified) << g.family << " " << c.name;
  }
}

}  // namespace

TEST(WorstCaseIr, SizeAndBenchmark) {
  auto g = gen_worst_case_ir(4);
  EXPECT_EQ(g.instance->node_count(), 16u);
  EXPECT_EQ(oracle::sopt(base_view(g), 4).length(), 12u);
  EXPECT_EQ(g.find("sopt")->value, 12u);
}

TEST(WorstCaseIr, SmallestMemberCertified) {
  auto g = gen_worst_case_ir(1);
  ASSERT_EQ(g.instance->node_count(), 4u);
  expect_all_verified(g);
  auto view = base_view(g);
  EXPECT_EQ(oracle::sopt(view, 1).length(), 3u);
  EXPECT_EQ(oracle::pi_ir(view).length(), 2u);
  EXPECT_LE(best_owner_utility_on_long_paths(view, 2), 1u);
}

TEST(WorstCaseIr, SingleCrossEdge) {
  auto g = gen_worst_case_ir(3);
  std::size_t cross = 0;
  for (const auto& e : g.instance->base_edges()) cross += g.instance->owner(e.from) != g.instance->owner(e.to);
  EXPECT_EQ(cross, 1u);
  EXPECT_TRUE(sample_random_edges(g.instance, 9).random_edges().empty());
}

TEST(SemiRandomIr, KTwo) {
  auto g = gen_semirandom_ir(2);
  EXPECT_EQ(g.instance->node_count(), 17u);
  auto view = base_view(g);
  EXPECT_EQ(oracle::opt(view).length(), 13u);
  EXPECT_EQ(oracle::pi_ir(view).length(), 7u);
}

TEST(SemiRandomIr, KOneCertified) {
  auto g = gen_semirandom_ir(1);
  expect_all_verified(g);
  auto view = base_view(g);
  EXPECT_EQ(oracle::opt(view).length(), 7u);
  EXPECT_EQ(oracle::pi_ir(view).length(), 4u);
}

TEST(SemiRandomIr, BlockAccounting) {
  // owner branch: 3 owner nodes per block; foreign branch: 1 owner node per block
  for (std::size_t k = 1; k <= 2; ++k) {
    auto g = gen_semirandom_ir(k);
    auto view = base_view(g);
    EXPECT_EQ(oracle::pi_ir(view).length(), 3 * k + 1);
    EXPECT_EQ(utility(oracle::opt(view), 0, *g.instance), k + k + 1);
  }
}

TEST(WorstCaseIc, WithAndWithoutX) {
  auto with = gen_worst_case_ic(2, true);
  auto without = gen_worst_case_ic(2, false);
  EXPECT_EQ(with.instance->node_count(), 12u);
  EXPECT_EQ(without.instance->node_count(), 11u);
  EXPECT_EQ(oracle::sopt(base_view(with), 2).length(), 8u);
  EXPECT_EQ(oracle::sopt(base_view(without), 2).length(), 6u);
}

TEST(WorstCaseIc, KOneCertified) {
  for (bool x : {true, false}) {
    auto g = gen_worst_case_ic(1, x);
    expect_all_verified(g);
    auto view = base_view(g);
    EXPECT_EQ(oracle::sopt(view, 1).length(), x ? 4u : 3u);
    if (!x) {
      EXPECT_GE(oracle::pi_ir(view).length(), 3u);
    }
  }
}

TEST(SemiRandomIc, WithAndWithoutSquares) {
  auto with = gen_semirandom_ic(2, true);
  auto without = gen_semirandom_ic(2, false);
  EXPECT_EQ(with.instance->node_count(), 12u);
  EXPECT_EQ(without.instance->node_count(), 10u);
  EXPECT_GE(oracle::opt(base_view(with)).length(), 8u);
  EXPECT_EQ(utility(oracle::opt(base_view(without)), 1, *without.instance), 0u);
}

TEST(SemiRandomIc, KOneCertified) {
  for (bool sq : {true, false}) expect_all_verified(gen_semirandom_ic(1, sq));
}

TEST(Certificates, VerifiedUpToFour) {
  SearchLimits wide;
  wide.max_search_nodes = 40;
  for (std::size_t k = 1; k <= 4; ++k) {
    expect_all_verified(gen_worst_case_ir(k, {}, wide));
    expect_all_verified(gen_semirandom_ir(k, {}, wide));
    expect_all_verified(gen_worst_case_ic(k, true, {}, wide));
    expect_all_verified(gen_worst_case_ic(k, false, {}, wide));
    expect_all_verified(gen_semirandom_ic(k, true, {}, wide));
    expect_all_verified(gen_semirandom_ic(k, false, {}, wide));
  }
}

TEST(Certificates, OverBudgetIsConstructed) {
  auto g = gen_worst_case_ir(20);
  EXPECT_EQ(g.find("sopt")->status, CertificateStatus::kConstructed);
  EXPECT_EQ(g.find("owner_utility_beyond_internal")->status, CertificateStatus::kConstructed);
  // the owner's internal region is a plain chain, which the exact search handles at any size
  EXPECT_EQ(g.find("pi_ir")->status, CertificateStatus::kVerified);
  EXPECT_THROW(gen_worst_case_ir(0), PreconditionViolated);
}

TEST(Chains, Layout) {
  auto g = gen_chains({{5, 3}, {4}});
  EXPECT_EQ(g.instance->node_count(), 12u);
  EXPECT_EQ(g.instance->altruist(), 0);
  EXPECT_EQ(g.instance->base_edges().size(), 4u + 2u + 3u);
  EXPECT_EQ(g.find("sopt_upper_bound")->value, 12u);
}

TEST(Fuzz, ZeroDensityGivesDisjointChains) {
  FuzzConfig config;
  config.chains = {{5}, {5}};
  auto inst = gen_random_fuzz(config, 3);
  EXPECT_EQ(inst.node_count(), 10u);
  EXPECT_EQ(inst.base_edges().size(), 8u);
  for (const auto& e : inst.base_edges()) EXPECT_EQ(inst.owner(e.from), inst.owner(e.to));
}

TEST(Fuzz, SameSeedSameInstance) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto config = random_fuzz_config(seed, 10);
    auto a = gen_random_fuzz(config, seed);
    auto b = gen_random_fuzz(config, seed);
    EXPECT_EQ(a.owners(), b.owners());
    EXPECT_EQ(a.base_edges(), b.base_edges());
    EXPECT_EQ(a.edge_probability().text(), b.edge_probability().text());
  }
}

TEST(Fuzz, CorpusSatisfiesInstanceInvariants) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto config = random_fuzz_config(seed, 10);
    auto inst = gen_random_fuzz(config, seed);
    EXPECT_LE(inst.node_count(), 10u);
    EXPECT_GE(inst.hospital_count(), 2u);
    EXPECT_EQ(inst.altruist_owner(), 0);
    for (HospitalId h = 0; h < static_cast<HospitalId>(inst.hospital_count()); ++h) {
      EXPECT_FALSE(inst.members(h).empty());
    }
    for (const auto& e : inst.base_edges()) EXPECT_NE(e.from, e.to);
    // the round trip through JSON reconstructs the same instance
    auto back = instance_from_json(instance_to_json(inst));
    EXPECT_EQ(back.instance->owners(), inst.owners());
    EXPECT_EQ(back.instance->base_edges(), inst.base_edges());
  }
}

TEST(InstanceIo, RoundTripWithCertificates) {
  auto g = gen_worst_case_ic(2, true, Probability::parse("0.25"));
  auto doc = instance_to_json(g);
  auto back = instance_from_json(doc);
  EXPECT_EQ(instance_to_json(back).dump(), doc.dump());
  EXPECT_EQ(back.family, "worst-ic");
  EXPECT_EQ(back.instance->edge_probability().text(), "0.25");
}

TEST(InstanceIo, RejectsUnknownAndMalformedFields) {
  auto doc = instance_to_json(*gen_chains({{3}, {2}}).instance);
  auto extra = doc;
  extra["weights"] = 1;
  EXPECT_THROW(instance_from_json(extra), InvalidInstance);
  auto numeric_p = doc;
  numeric_p["p"] = 0.5;
  EXPECT_THROW(instance_from_json(numeric_p), InvalidInstance);
  auto no_p = doc;
  no_p.erase("p");
  EXPECT_THROW(instance_from_json(no_p), InvalidInstance);
  auto wrong_n = doc;
  wrong_n["n"] = 9;
  EXPECT_THROW(instance_from_json(wrong_n), InvalidInstance);
  auto bad_edge = doc;
  bad_edge["base_edges"].push_back({1, 2, 3});
  EXPECT_THROW(instance_from_json(bad_edge), InvalidInstance);
}

TEST(InstanceIo, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "kxchain_instance_io_test.json";
  auto g = gen_semirandom_ir(1);
  write_instance_file(path.string(), g);
  auto back = read_instance_file(path.string());
  EXPECT_EQ(instance_to_json(back).dump(), instance_to_json(g).dump());
  std::filesystem::remove(path);
  EXPECT_THROW(read_instance_file((std::filesystem::temp_directory_path() / "missing_kxchain.json").string()),
               std::ios_base::failure);
}
