#include <gtest/gtest.h>

#include <map>
#include <random>

#include "support.hpp"
#include "treedist/error.hpp"
#include "treedist/random_tree.hpp"
#include "treedist/rf.hpp"
#include "treedist/spr.hpp"

namespace treedist {
namespace {

using testing::L;
using testing::edge_with_side;
using testing::pendant_edge;
using testing::rooted;
using testing::unrooted;
using testing::vertex_of;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::DomainError;
}

// Edge above the vertex whose clade is exactly `clade` (rooted trees).
EdgeId edge_above(const Tree& t, std::vector<std::string> clade) {
  std::sort(clade.begin(), clade.end());
  const RootedView view = hang_at_root(t);
  const LabelIndex index = LabelIndex::of(t);
  const auto sets = subtree_leaf_sets(t, view, index);
  for (VertexId v : view.preorder) {
    if (v == view.top) continue;
    std::vector<std::string> labels;
    for (std::size_t i : sets[v].members()) labels.push_back(index.label(i));
    if (labels == clade) return view.parent_edge[v];
  }
  return npos;
}

VertexId vertex_above(const Tree& t, const std::vector<std::string>& clade) {
  const EdgeId e = edge_above(t, clade);
  const RootedView view = hang_at_root(t);
  const Edge& ed = t.edge(e);
  return view.parent[ed.child] == ed.parent ? ed.child : ed.parent;
}

bool is_rooted_binary(const Tree& t) {
  if (!t.rooted() || !validate(t).empty()) return false;
  const RootedView view = hang_at_root(t);
  for (VertexId v : view.preorder)
    if (!view.is_leaf(v) && view.children[v].size() != 2) return false;
  return true;
}

TEST(Rspr, SingleMove) {
  const Tree t = rooted("(((1,2),3),4);");
  const Tree moved = rspr_apply(t, vertex_of(t, "4"), edge_above(t, L({"1", "2"})));
  EXPECT_TRUE(is_identical(moved, rooted("(((1,2),4),3);")));
  EXPECT_TRUE(is_rooted_binary(moved));

  // Regrafting above the root makes the new vertex the root.
  const Tree top = rspr_apply(t, vertex_of(t, "1"), kRootEdge);
  EXPECT_TRUE(is_identical(top, rooted("(((2,3),4),1);")));
}

TEST(Rspr, Preconditions) {
  const Tree t = rooted("(((1,2),3),4);");
  EXPECT_EQ(code_of([&] { rspr_apply(t, *t.root(), 0); }), ErrorCode::RootPrune);
  // Sibling edge and the edge above the parent are adjacent to the parent.
  EXPECT_EQ(code_of([&] { rspr_apply(t, vertex_of(t, "1"), pendant_edge(t, "2")); }),
            ErrorCode::InvalidTarget);
  EXPECT_EQ(code_of([&] { rspr_apply(t, vertex_of(t, "1"), edge_above(t, L({"1", "2"}))); }),
            ErrorCode::InvalidTarget);
  // Inside the pruned clade.
  const VertexId c12 = vertex_above(t, L({"1", "2"}));
  EXPECT_EQ(code_of([&] { rspr_apply(t, c12, pendant_edge(t, "1")); }), ErrorCode::InvalidTarget);
  EXPECT_EQ(code_of([&] { rspr_apply(t, c12, edge_above(t, L({"1", "2"}))); }),
            ErrorCode::InvalidTarget);
  // Root edge when the parent is the root.
  EXPECT_EQ(code_of([&] { rspr_apply(t, vertex_of(t, "4"), kRootEdge); }), ErrorCode::InvalidTarget);
  EXPECT_EQ(code_of([&] { rspr_apply(unrooted("((1,2),3,4);"), 0, 0); }), ErrorCode::UnrootedInput);
  EXPECT_EQ(code_of([&] { rspr_apply(rooted("((1,2,3),4);"), 0, 0); }), ErrorCode::NotBinary);
  EXPECT_EQ(code_of([&] { rspr_apply(t, vertex_of(t, "1"), 99); }), ErrorCode::EdgeNotFound);
}

TEST(Rspr, AlwaysRootedBinary) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const Tree t = random_binary_tree(4 + trial % 8, rng, true, trial % 2 == 0);
    for (const Tree& next : rspr_neighbors(t)) {
      EXPECT_TRUE(is_rooted_binary(next)) << serialize(next);
      EXPECT_EQ(next.leaf_labels(), t.leaf_labels());
      EXPECT_FALSE(is_identical(next, t));
    }
  }
}

TEST(Rspr, NeighborhoodSize) {
  // One-move neighbourhoods agree with the trees at forest distance 1.
  const auto all = all_binary_trees(5, true);
  ASSERT_EQ(all.size(), 105u);
  const Tree caterpillar = rooted("((((1,2),3),4),5);");
  const Tree balanced = rooted("(((1,2),3),(4,5));");
  for (const Tree* t : {&caterpillar, &balanced}) {
    std::size_t at_one = 0;
    for (const Tree& other : all)
      if (spr_distance_maf(*t, other).distance == 1) ++at_one;
    EXPECT_EQ(rspr_neighbors(*t).size(), at_one);
  }
  EXPECT_EQ(rspr_neighbors(caterpillar).size(), 24u);
  EXPECT_EQ(rspr_neighbors(balanced).size(), 28u);
}

TEST(Maf, Examples) {
  const Tree t = rooted("(((1,2),3),(4,5));");
  const SprResult same = spr_distance_maf(t, t);
  EXPECT_EQ(same.distance, 0u);
  EXPECT_EQ(same.forest.components.size(), 1u);

  const Tree a = rooted("((1,2),3);");
  const Tree b = rooted("((1,3),2);");
  const SprResult r = spr_distance_maf(a, b);
  EXPECT_EQ(r.distance, 1u);
  EXPECT_TRUE(check_agreement_forest(a, b, r.forest).empty());
  EXPECT_EQ(spr_distance_bfs(a, b), 1u);

  EXPECT_EQ(code_of([] { spr_distance_maf(unrooted("((1,2),3,4);"), unrooted("((1,2),3,4);")); }),
            ErrorCode::UnrootedInput);
  std::mt19937_64 rng(1);
  const Tree big = random_binary_tree(11, rng, true);
  EXPECT_EQ(code_of([&] { spr_distance_maf(big, big); }), ErrorCode::TooLarge);
  EXPECT_EQ(code_of([&] { spr_distance_bfs(random_binary_tree(8, rng, true), random_binary_tree(8, rng, true)); }),
            ErrorCode::TooLarge);
  EXPECT_EQ(code_of([&] { spr_distance_maf(a, rooted("((1,2),4);")); }), ErrorCode::LabelSetMismatch);
}

TEST(Maf, CheckerRejectsBadForests) {
  const Tree a = rooted("((1,2),(3,4));");
  const Tree b = rooted("((1,3),(2,4));");
  const Tree ar = with_root_marker(a);
  AgreementForest bad;
  // Not a partition.
  bad.components.push_back({L({"1", "2"}), restrict_to(ar, L({"1", "2"}))});
  EXPECT_FALSE(check_agreement_forest(a, b, bad).empty());
  // {1,2} and {3,4} overlap in b's induced subtrees.
  bad.components.push_back({L({"3", "4"}), restrict_to(ar, L({"3", "4"}))});
  bad.components.push_back({L({"root"}), restrict_to(ar, L({"root"}))});
  EXPECT_FALSE(check_agreement_forest(a, b, bad).empty());
  const SprResult r = spr_distance_maf(a, b);
  EXPECT_TRUE(check_agreement_forest(a, b, r.forest).empty());
}

TEST(Maf, AllFiveLeafPairsMatchSearch) {
  const auto all = all_binary_trees(5, true);
  std::size_t checked = 0;
  for (const Tree& a : all) {
    const auto reach = spr_distances_bfs_from(a);
    ASSERT_EQ(reach.size(), 105u);
    for (const auto& [b, d] : reach) {
      const SprResult r = spr_distance_maf(a, b);
      ASSERT_EQ(r.distance, d) << serialize(a) << " " << serialize(b);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 105u * 105u);
}

TEST(Maf, RandomSixLeafPairs) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 25; ++trial) {
    const Tree a = random_binary_tree(6, rng, true);
    const Tree b = random_binary_tree(6, rng, true);
    const SprResult r = spr_distance_maf(a, b);
    EXPECT_EQ(r.distance, spr_distance_bfs(a, b));
    EXPECT_TRUE(check_agreement_forest(a, b, r.forest).empty());
  }
}

TEST(Maf, MetricProperties) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 5 + trial % 6;
    const Tree a = random_binary_tree(n, rng, true);
    const Tree b = random_binary_tree(n, rng, true);
    const Tree c = random_binary_tree(n, rng, true);
    const std::size_t ab = spr_distance_maf(a, b).distance;
    EXPECT_EQ(ab, spr_distance_maf(b, a).distance);
    EXPECT_EQ(ab == 0, is_identical(a, b));
    EXPECT_LE(spr_distance_maf(a, c).distance, ab + spr_distance_maf(b, c).distance);
    EXPECT_LE(ab, static_cast<std::size_t>(n - 2));
    EXPECT_TRUE(check_agreement_forest(a, b, spr_distance_maf(a, b).forest).empty());
  }
}

}  // namespace
}  // namespace treedist
