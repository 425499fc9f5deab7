#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "treedist/error.hpp"
#include "treedist/quartet_triplet.hpp"
#include "treedist/random_tree.hpp"

namespace treedist {
namespace {

using testing::L;
using testing::rooted;
using testing::unrooted;

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Hangs a new leaf from a vertex subdividing edge e.
Tree with_leaf(const Tree& t, EdgeId e, const std::string& label, double w = 1.0) {
  Tree out;
  for (VertexId v = 0; v < t.vertex_count(); ++v) out.add_vertex(t.labels(v));
  const VertexId mid = out.add_vertex();
  for (EdgeId f = 0; f < t.edge_count(); ++f) {
    const Edge& ed = t.edge(f);
    if (f == e) {
      out.add_edge(ed.parent, mid, ed.weight / 2);
      out.add_edge(mid, ed.child, ed.weight / 2);
    } else {
      out.add_edge(ed.parent, ed.child, ed.weight);
    }
  }
  out.add_edge(mid, out.add_vertex(label), w);
  out.set_weighted(t.weighted());
  if (t.rooted()) out.set_root(*t.root());
  return out;
}

// Contracts a few random internal edges to obtain multifurcations.
Tree coarsen(Tree t, std::mt19937_64& rng, int rounds) {
  for (int r = 0; r < rounds; ++r) {
    std::vector<EdgeId> internal;
    for (EdgeId e = 0; e < t.edge_count(); ++e)
      if (!t.is_tip(t.edge(e).parent) && !t.is_tip(t.edge(e).child)) internal.push_back(e);
    if (internal.empty()) break;
    t = contract(t, internal[rng() % internal.size()]);
  }
  return t;
}

TEST(InducedTopology, Examples) {
  const SubsetTopology q = induced_topology(unrooted("((1,2),(3,4));"), L({"1", "2", "3", "4"}));
  EXPECT_EQ(q.kind, TopologyKind::Resolved);
  EXPECT_EQ(q.cherry, (std::array<std::string, 2>{"1", "2"}));
  EXPECT_EQ(induced_topology(star_tree(4, false), L({"1", "2", "3", "4"})).kind,
            TopologyKind::Unresolved);
  const SubsetTopology t = induced_topology(rooted("(((1,2),3),4);"), L({"1", "2", "4"}));
  EXPECT_EQ(t.kind, TopologyKind::Resolved);
  EXPECT_EQ(t.cherry, (std::array<std::string, 2>{"1", "2"}));
}

TEST(InducedTopology, Errors) {
  try {
    induced_topology(rooted("(((1,2),3),4);"), L({"1", "2", "3", "4"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SubsetSizeMismatch);
  }
  try {
    categorize(unrooted("((1,2),(3,4));"), unrooted("((1,2),(3,4));"), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RootednessMismatch);
  }
  try {
    quartet_distance(rooted("((1,2),(3,4));"), rooted("((1,2),(3,4));"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RootednessMismatch);
  }
}

TEST(Categorize, SelfComparisonAgrees) {
  std::mt19937_64 rng(3);
  const Tree t = random_binary_tree(9, rng, true);
  const CategoryTable c = categorize(t, t, 3);
  EXPECT_EQ(c, (CategoryTable{choose(9, 3), 0, 0, 0, 0}));
}

TEST(Categorize, StarsAreUnresolved) {
  const Tree s = star_tree(7, true);
  EXPECT_EQ(categorize(s, s, 3), (CategoryTable{0, 0, 0, 0, choose(7, 3)}));
}

TEST(Categorize, PinnedFourLeafTriplets) {
  const CategoryTable c = categorize(rooted("(((1,2),3),4);"), rooted("((1,(2,3)),4);"), 3);
  EXPECT_EQ(c, categorize_reference(rooted("(((1,2),3),4);"), rooted("((1,(2,3)),4);"), 3));
  EXPECT_EQ(c, (CategoryTable{3, 1, 0, 0, 0}));
}

TEST(Distances, Examples) {
  const Tree t = unrooted("((1,2),(3,4));");
  EXPECT_EQ(quartet_distance(t, t), 0u);
  EXPECT_EQ(quartet_distance(t, unrooted("((1,3),(2,4));")), 1u);
  EXPECT_EQ(quartet_distance(t, star_tree(4, false)), 1u);
  EXPECT_EQ(categorize(t, star_tree(4, false), 4).only_a, 1u);
  EXPECT_EQ(triplet_distance(rooted("((1,2),3);"), rooted("((1,2),3);")), 0u);
  EXPECT_EQ(triplet_distance(rooted("((1,2),3);"), rooted("((1,3),2);")), 1u);
}

TEST(Categorize, FastMatchesEnumeration) {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 4 + static_cast<int>(rng() % 7);
    const bool r = rep % 2 == 0;
    const int k = r ? 3 : 4;
    const Tree a = coarsen(random_binary_tree(n, rng, r), rng, static_cast<int>(rng() % 3));
    const Tree b = coarsen(random_binary_tree(n, rng, r), rng, static_cast<int>(rng() % 3));
    const CategoryTable ref = categorize_reference(a, b, k);
    EXPECT_EQ(categorize(a, b, k), ref);
    EXPECT_EQ(categorize_serial(a, b, k), ref);
    EXPECT_EQ(ref.total(), choose(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k)));
    const CategoryTable back = categorize(b, a, k);
    EXPECT_EQ(back.only_a, ref.only_b);
    EXPECT_EQ(back.distance(), ref.distance());
  }
}

TEST(Categorize, UnsuppressedDegreeTwoVertices) {
  const Tree a = parse_tree("((((1,2)),3),(4,5));", {Rootedness::Rooted, false});
  const Tree b = rooted("((1,(2,3)),(4,5));");
  EXPECT_EQ(categorize(a, b, 3), categorize_reference(a, b, 3));
}

TEST(Distances, MonotoneUnderLeafAddition) {
  std::mt19937_64 rng(99);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 4 + static_cast<int>(rng() % 6);
    const bool r = rep % 2 == 0;
    Tree a = random_binary_tree(n, rng, r);
    Tree b = random_binary_tree(n, rng, r);
    for (int extra = 1; extra <= 3; ++extra) {
      const std::uint64_t before = r ? triplet_distance(a, b) : quartet_distance(a, b);
      const std::string label = "x" + std::to_string(extra);
      a = with_leaf(a, rng() % a.edge_count(), label);
      b = with_leaf(b, rng() % b.edge_count(), label);
      const std::uint64_t after = r ? triplet_distance(a, b) : quartet_distance(a, b);
      EXPECT_LE(before, after);
    }
  }
}

TEST(TripletLength, Examples) {
  const Tree t = rooted("((1:0.5,2:1):0.25,(3:2,4:1):1);");
  EXPECT_EQ(triplet_length_distance(t, t), 0.0);
  const Tree a = rooted("((1:1,2:1):1,3:1);");
  const Tree b = rooted("((1:2,2:1):1,3:1);");
  EXPECT_DOUBLE_EQ(triplet_length_reference(a, b), 2.0);
  EXPECT_DOUBLE_EQ(triplet_length_distance(a, b), 2.0);
  // Every triplet disagrees, so nothing is summed.
  EXPECT_EQ(triplet_length_distance(a, rooted("((1:1,3:1):1,2:1);")), 0.0);
}

TEST(TripletLength, RequiresWeights) {
  try {
    triplet_length_distance(rooted("((1,2),3);"), rooted("((1,2),3);"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnweightedInput);
  }
}

TEST(TripletLength, FastMatchesEnumeration) {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 3 + static_cast<int>(rng() % 8);
    const Tree a = coarsen(random_binary_tree(n, rng, true, true), rng, static_cast<int>(rng() % 2));
    const Tree b = coarsen(random_binary_tree(n, rng, true, true), rng, static_cast<int>(rng() % 2));
    const double fast = triplet_length_distance(a, b);
    EXPECT_NEAR(fast, triplet_length_reference(a, b), 1e-9);
    EXPECT_NEAR(fast, triplet_length_distance(b, a), 1e-9);
    EXPECT_GE(fast, 0.0);
  }
}

}  // namespace
}  // namespace treedist
