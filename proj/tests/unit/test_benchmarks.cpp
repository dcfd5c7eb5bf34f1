#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "kxchain/benchmarks.hpp"
#include "kxchain/errors.hpp"
#include "kxchain/instances.hpp"
#include "oracle.hpp"

using namespace kxchain;
using fixtures::make;
using fixtures::P;

namespace {

ViewGraph view_of(const std::shared_ptr<const Instance>& inst, std::uint64_t seed = 0) {
  return full_view(sample_random_edges(inst, seed));
}

std::shared_ptr<const Instance> fuzz(std::uint64_t seed, std::size_t max_n) {
  return std::make_shared<const Instance>(gen_random_fuzz(random_fuzz_config(seed, max_n), seed));
}

}  // namespace

TEST(Opt, IsolatedAltruist) {
  auto view = view_of(make({0, 1, 1}, {{1, 2}}));
  auto r = opt(view);
  EXPECT_EQ(r.path, P({0}));
  EXPECT_TRUE(r.certified);
}

TEST(Opt, SemiRandomIrFamilyKTwo) {
  auto gen = gen_semirandom_ir(2);
  EXPECT_GE(opt(view_of(gen.instance)).length(), 13u);
}

TEST(Opt, MatchesOracleOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto view = view_of(fuzz(seed, 12), seed);
    EXPECT_EQ(opt(view).path, oracle::opt(view)) << "seed " << seed;
  }
}

TEST(Opt, LexicographicTieBreak) {
  // 0 -> 1 -> 3 and 0 -> 2 -> 3 are both longest
  auto view = view_of(make({0, 0, 0, 0}, {{0, 2}, {0, 1}, {1, 3}, {2, 3}}));
  EXPECT_EQ(opt(view).path, P({0, 1, 3}));
}

TEST(Opt, BudgetExceededOnLargeBranchingRegion) {
  std::vector<HospitalId> owners(30, 0);
  std::vector<Edge> edges;
  for (NodeId v = 0; v + 1 < 30; ++v) edges.push_back({v, v + 1});
  edges.push_back({0, 2});
  auto view = view_of(make(owners, edges));
  EXPECT_THROW(opt(view), ResourceBudgetExceeded);
  SearchLimits wide;
  wide.max_search_nodes = 40;
  EXPECT_EQ(opt(view, wide).length(), 30u);
}

TEST(Opt, LinearRegionIsExemptFromBudget) {
  std::vector<HospitalId> owners(100, 0);
  std::vector<Edge> edges;
  for (NodeId v = 0; v + 1 < 100; ++v) edges.push_back({v, v + 1});
  EXPECT_EQ(opt(view_of(make(owners, edges))).length(), 100u);
}

TEST(SOpt, UnitSIsOpt) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto view = view_of(fuzz(seed, 10), seed);
    EXPECT_EQ(sopt(view, 1).length(), opt(view).length());
  }
}

TEST(SOpt, WorstCaseIrFamilyKFour) {
  auto gen = gen_worst_case_ir(4);
  ASSERT_EQ(gen.instance->node_count(), 16u);
  EXPECT_EQ(sopt(view_of(gen.instance), 4).length(), 12u);
}

TEST(SOpt, TooLargeSGivesEmptyPath) {
  auto gen = gen_worst_case_ir(2);
  auto view = view_of(gen.instance);
  EXPECT_TRUE(sopt(view, gen.instance->node_count() + 1).path.empty());
}

TEST(SOpt, WitnessSatisfiesConstraintAndMatchesOracle) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    auto inst = fuzz(seed, 12);
    auto view = view_of(inst, seed);
    for (std::size_t s : {1u, 2u, 3u, 4u}) {
      auto r = sopt(view, s);
      EXPECT_EQ(r.path, oracle::sopt(view, s)) << "seed " << seed << " s " << s;
      for (const auto& seg : segments(r.path, *inst)) EXPECT_GE(seg.path.length(), s);
    }
  }
}

TEST(AvgOpt, UnitSIsOpt) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto view = view_of(fuzz(seed, 10), seed);
    EXPECT_EQ(avgopt(view, 1).length(), opt(view).length());
  }
}

TEST(AvgOpt, SandwichAndMonotonicity) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto view = view_of(fuzz(seed, 12), seed);
    const std::size_t full = opt(view).length();
    std::size_t prev_s = full;
    std::size_t prev_avg = full;
    for (std::size_t s : {1u, 2u, 3u}) {
      const std::size_t so = sopt(view, s).length();
      const std::size_t av = avgopt(view, s).length();
      EXPECT_LE(so, av);
      EXPECT_LE(av, full);
      EXPECT_LE(so, prev_s);
      EXPECT_LE(av, prev_avg);
      prev_s = so;
      prev_avg = av;
    }
  }
}

TEST(AvgOpt, MeanMayHideShortSegment) {
  // a: 0 ; b: 1 ; a: 2 ; b: 3..7  -> b segments {1, 5}, mean 3
  std::vector<HospitalId> owners = {0, 1, 0, 1, 1, 1, 1, 1};
  std::vector<Edge> edges = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}};
  auto inst = make(owners, edges);
  auto view = view_of(inst);
  auto r = avgopt(view, 3);
  EXPECT_EQ(r.length(), oracle::avgopt(view, 3).length());
  // hospital 0 has two unit segments, mean 1 < 3, so it must not appear past the altruist
  const Path expected = oracle::avgopt(view, 3);
  EXPECT_EQ(r.path, expected);

  // with hospital 0 owning a long head, both b segments are usable
  std::vector<HospitalId> owners2 = {0, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1, 1};
  std::vector<Edge> edges2 = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {8, 9}, {9, 10}, {10, 11}};
  auto view2 = view_of(make(owners2, edges2));
  auto r2 = avgopt(view2, 3);
  EXPECT_EQ(r2.length(), 12u);
  EXPECT_EQ(r2.path, oracle::avgopt(view2, 3));
  EXPECT_LT(sopt(view2, 3).length(), 12u);
}

TEST(PiIr, NoInternalSuccessor) {
  auto view = view_of(make({0, 1, 0}, {{0, 1}, {1, 2}}));
  EXPECT_EQ(pi_ir(view).path, P({0}));
}

TEST(PiIr, SemiRandomIrFamilyKTwo) {
  auto gen = gen_semirandom_ir(2);
  EXPECT_EQ(pi_ir(view_of(gen.instance)).length(), 7u);
}

TEST(PiIr, MatchesOracleOnRandomGraphs) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto view = view_of(fuzz(seed, 12), seed);
    EXPECT_EQ(pi_ir(view).path, oracle::pi_ir(view)) << "seed " << seed;
  }
}

TEST(BenchmarkKind, ParseAndPrint) {
  for (auto k : {BenchmarkKind::kOpt, BenchmarkKind::kSOpt, BenchmarkKind::kAvgOpt, BenchmarkKind::kPiIR}) {
    EXPECT_EQ(parse_benchmark_kind(to_string(k)), k);
  }
  EXPECT_THROW(parse_benchmark_kind("best"), PreconditionViolated);
}
