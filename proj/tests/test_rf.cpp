#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support.hpp"
#include "treedist/error.hpp"
#include "treedist/random_tree.hpp"
#include "treedist/rf.hpp"

namespace treedist {
namespace {

using testing::rooted;
using testing::unrooted;

// Unrooted ((1,2),3,4): internal edge a1 joins x (with 3, 4) and y (with 1, 2).
// With `subdivide`, a1 is replaced by the chain x - m - y (edges b1, b2).
Tree rfl_figure(bool subdivide, double w1, double w2 = 0.0) {
  Tree t;
  const auto x = t.add_vertex(), y = t.add_vertex();
  t.add_edge(x, t.add_vertex("3"), 1.0);
  t.add_edge(x, t.add_vertex("4"), 1.0);
  t.add_edge(y, t.add_vertex("1"), 1.0);
  t.add_edge(y, t.add_vertex("2"), 1.0);
  if (subdivide) {
    const auto m = t.add_vertex();
    t.add_edge(x, m, w1);
    t.add_edge(m, y, w2);
  } else {
    t.add_edge(x, y, w1);
  }
  t.set_weighted(true);
  return t;
}

TEST(Rf, Examples) {
  const Tree t = rooted("((1,2),(3,4));");
  EXPECT_EQ(rf_distance(t, t), 0u);
  EXPECT_EQ(rf_distance(rooted("((1,2),3);"), rooted("((1,3),2);")), 2u);
  EXPECT_EQ(rf_distance_oracle(rooted("((1,2),3);"), rooted("((1,3),2);")), 2u);
}

TEST(Rf, TwoContractionsApart) {
  // ((1,2),3) -> 3-star -> ((1,3),2): one contraction and one expansion.
  const Tree a = rooted("((1,2),3);");
  const Tree b = rooted("((1,3),2);");
  EXPECT_EQ(rf_distance(a, b), 2u);
  EXPECT_EQ(rf_distance(a, star_tree(3, true)), 1u);
  EXPECT_EQ(rf_distance(star_tree(3, true), b), 1u);
}

TEST(Rf, CaterpillarVersusBalancedPinned) {
  const Tree cat = rooted("(((((((1,2),3),4),5),6),7),8);");
  const Tree bal = rooted("(((1,2),(3,4)),((5,6),(7,8)));");
  // Non-trivial clusters: 6 and 6, sharing {1,2} and {1,2,3,4}.
  EXPECT_EQ(rf_distance_oracle(cat, bal), 8u);
  EXPECT_EQ(rf_distance(cat, bal), 8u);
}

TEST(Rf, SingleLeafRelocationChangesEveryClade) {
  const Tree a = rooted("(((((1,2),3),4),5),6);");
  const Tree b = rooted("(((((2,3),4),5),6),1);");
  EXPECT_EQ(rf_distance(a, b), 8u);
}

TEST(Rf, MatchesOracleOnRandomPairs) {
  std::mt19937_64 rng(101);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 3 + static_cast<int>(rng() % 62);
    const bool r = rep % 2 == 0;
    if (!r && n < 4) continue;
    const Tree a = random_binary_tree(n, rng, r);
    const Tree b = random_binary_tree(n, rng, r);
    const RfDetail d = rf_detail(a, b);
    EXPECT_EQ(d.distance, rf_distance_oracle(a, b));
    EXPECT_EQ(d.distance, d.clusters_a + d.clusters_b - 2 * d.shared);
    if (r) {
      const auto ca = clusters(a), cb = clusters(b);
      std::size_t shared = 0;
      for (const auto& c : ca) shared += cb.count(c);
      EXPECT_EQ(d.shared, shared);
      EXPECT_EQ(d.clusters_a, ca.size());
    }
  }
}

TEST(Rf, NonBinaryAndUnsuppressedInputs) {
  const Tree a = rooted("((1,2,3),(4,5));");
  const Tree b = parse_tree("((((1,2)),3),(4,5));", {Rootedness::Rooted, false});
  EXPECT_EQ(rf_distance(a, b), rf_distance_oracle(a, b));
  EXPECT_EQ(rf_distance(a, b), 1u);
}

TEST(Rf, ZeroIffIdentical) {
  const auto trees = all_binary_trees(5, true);
  for (std::size_t i = 0; i < trees.size(); i += 7)
    for (std::size_t j = 0; j < trees.size(); j += 5)
      EXPECT_EQ(rf_distance(trees[i], trees[j]) == 0, is_identical(trees[i], trees[j]));
}

TEST(Rf, Errors) {
  try {
    rf_distance(rooted("(1,2);"), rooted("(1,3);"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LabelSetMismatch);
  }
  try {
    rf_distance(rooted("((1,2),(3,4));"), unrooted("((1,2),(3,4));"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnrootedInput);
  }
}

TEST(Rf, UnrootedOverSplits) {
  EXPECT_EQ(rf_distance(unrooted("((1,2),3,(4,5));"), unrooted("((1,3),2,(4,5));")), 2u);
  EXPECT_EQ(rf_distance(unrooted("(1,2,3,4);"), unrooted("((1,2),(3,4));")), 1u);
}

TEST(Consensus, SingleTree) {
  const Tree t = rooted("((1,2),(3,(4,5)));");
  const Tree c = strict_consensus(std::span<const Tree>(&t, 1));
  EXPECT_TRUE(is_identical(c, t));
}

TEST(Consensus, DisagreeingTripletsGiveStar) {
  const std::vector<Tree> ts{rooted("((1,2),3);"), rooted("((1,3),2);")};
  EXPECT_TRUE(is_identical(strict_consensus(ts), star_tree(3, true)));
}

TEST(Consensus, ClusterCountMatchesSharedClusters) {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 3 + static_cast<int>(rng() % 20);
    const std::vector<Tree> ts{random_binary_tree(n, rng, true), random_binary_tree(n, rng, true)};
    const Tree c = strict_consensus(ts);
    EXPECT_TRUE(validate(c).empty());
    const auto ca = clusters(ts[0]), cb = clusters(ts[1]), cc = clusters(c);
    std::set<Cluster> both;
    for (const auto& x : ca)
      if (cb.count(x)) both.insert(x);
    EXPECT_EQ(cc, both);
    EXPECT_EQ(cc.size(), rf_detail(ts[0], ts[1]).shared);
  }
}

TEST(Consensus, ThreeTrees) {
  const std::vector<Tree> ts{rooted("(((1,2),3),(4,5));"), rooted("(((1,2),4),(3,5));"),
                             rooted("((1,2),(3,(4,5)));")};
  EXPECT_TRUE(is_identical(strict_consensus(ts), rooted("((1,2),3,4,5);")));
}

TEST(Rfl, WeightIdenticalIsZero) {
  const Tree t = rooted("((1:0.3,2:0.7):1.1,(3:2,4:0.5):0.4);");
  EXPECT_EQ(rfl_distance(t, t).value, 0.0);
}

TEST(Rfl, SingleInternalWeightChange) {
  const Tree a = unrooted("((1:1,2:1):1,3:1,4:1);");
  const Tree b = unrooted("((1:1,2:1):3,3:1,4:1);");
  const RflResult r = rfl_distance(a, b);
  EXPECT_DOUBLE_EQ(r.value, 2.0);
  EXPECT_EQ(r.unmatched_a, 0.0);
  EXPECT_EQ(r.matched.size(), 5u);
}

TEST(Rfl, UnmatchedEdgesAddTheirWeights) {
  const Tree a = unrooted("((1:1,2:1):0.5,3:1,(4:1,5:1):2);");
  const Tree b = unrooted("((1:1,3:1):0.25,2:1,(4:1,5:1):2);");
  EXPECT_DOUBLE_EQ(rfl_distance(a, b).value, 0.75);
}

TEST(Rfl, RootedInputsReadUnrootedAfterSuppression) {
  const Tree a = rooted("((1:1,2:1):1,(3:1,4:1):2);");
  const Tree b = rooted("((1:1,2:1):2.5,(3:1,4:1):0.5);");
  EXPECT_DOUBLE_EQ(rfl_distance(a, b).value, 0.0);
  EXPECT_THROW(rfl_distance(a, b, true), AmbiguousMatchingError);
}

TEST(Rfl, FigureRawModeIsAmbiguous) {
  const Tree a = rfl_figure(false, 1.0);
  const Tree b = rfl_figure(true, 1.0, 1.0);
  try {
    rfl_distance(a, b, true);
    FAIL();
  } catch (const AmbiguousMatchingError& e) {
    EXPECT_EQ(e.code(), ErrorCode::AmbiguousMatching);
    EXPECT_EQ(e.matching_count(), 2u);
    // With every weight 1 both matchings happen to give the same value.
    EXPECT_EQ(e.candidates(), std::vector<double>{0.0});
  }
}

TEST(Rfl, FigureTwoValuesAndAsymmetry) {
  const Tree a = rfl_figure(false, 1.0);
  const Tree b = rfl_figure(true, 1.0, 2.0);
  try {
    rfl_distance(a, b, true);
    FAIL();
  } catch (const AmbiguousMatchingError& e) {
    EXPECT_EQ(e.candidates(), (std::vector<double>{0.0, 1.0}));
  }
  EXPECT_DOUBLE_EQ(rfl_distance(b, a, true).value, 1.0);
  // Normalized: b1 and b2 merge into one edge of weight 3.
  EXPECT_DOUBLE_EQ(rfl_distance(a, b).value, 2.0);
  EXPECT_DOUBLE_EQ(rfl_distance(b, a).value, 2.0);
}

TEST(Rfl, SymmetricWhenNormalized) {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 4 + static_cast<int>(rng() % 20);
    const Tree a = random_binary_tree(n, rng, rep % 2 == 0, true);
    const Tree b = random_binary_tree(n, rng, rep % 2 == 0, true);
    EXPECT_NEAR(rfl_distance(a, b).value, rfl_distance(b, a).value, 1e-12);
    EXPECT_GE(rfl_distance(a, b).value, 0.0);
  }
}

TEST(Rfl, RequiresWeights) {
  try {
    rfl_distance(rooted("((1,2),3);"), rooted("((1,3),2);"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnweightedInput);
  }
}

TEST(MetricSuite, RfOnRandomSample) {
  std::mt19937_64 rng(2024);
  std::vector<Tree> sample;
  for (int i = 0; i < 50; ++i) sample.push_back(random_binary_tree(6, rng, true));
  EXPECT_TRUE(rf_is_metric_suite(sample).empty());
}

TEST(MetricSuite, ReportsCorruptedDistance) {
  std::mt19937_64 rng(1);
  std::vector<Tree> sample;
  for (int i = 0; i < 6; ++i) sample.push_back(random_binary_tree(5, rng, true));
  const auto bad = check_metric_axioms(sample, [](const Tree& a, const Tree& b) {
    return static_cast<double>(rf_distance(a, b)) - 1.0;
  });
  std::set<std::string> kinds;
  for (const auto& v : bad) kinds.insert(v.axiom);
  EXPECT_TRUE(kinds.count("non-negativity"));
  EXPECT_TRUE(kinds.count("identity"));
  const auto asym = check_metric_axioms(sample, [&](const Tree& a, const Tree& b) {
    return &a < &b ? 2.0 * static_cast<double>(rf_distance(a, b))
                   : static_cast<double>(rf_distance(a, b));
  });
  bool symmetry = false;
  for (const auto& v : asym) symmetry |= v.axiom == "symmetry";
  EXPECT_TRUE(symmetry);
  EXPECT_THROW(check_metric_axioms(std::span<const Tree>(sample).first(2),
                                   [](const Tree&, const Tree&) { return 0.0; }),
               Error);
}

}  // namespace
}  // namespace treedist
