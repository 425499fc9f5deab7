#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "treedist/tree.hpp"

namespace treedist {

// Stands for the edge above the root when passed as a regraft target.
inline constexpr EdgeId kRootEdge = npos;

// Prunes the clade at `pruned`, suppresses its old parent, and regrafts the
// clade onto a new vertex subdividing `target_edge` (kRootEdge makes the new
// vertex the root). Vertex ids of the input survive except for the old
// parent, whose slot holds the new vertex. The new edge above the
// subdividing vertex has weight 0 and a suppressed pair of edges sums.
// Throws UnrootedInput, NotBinary, RootPrune, InvalidTarget (target inside
// the pruned clade or incident to the pruned vertex's parent), EdgeNotFound.
Tree rspr_apply(const Tree& tree, VertexId pruned, EdgeId target_edge);

// Distinct trees one legal move away, the input itself excluded.
std::vector<Tree> rspr_neighbors(const Tree& tree);

// One component per label subset. The subset holding kRootLabel stands for
// the root marker rho above the original root.
struct ForestComponent {
  std::vector<std::string> labels;  // sorted
  Tree tree;                        // restriction of the rho-augmented tree
};

struct AgreementForest {
  std::vector<ForestComponent> components;
};

// Both trees with rho attached above the root: a new root whose children are
// the old root and a leaf labelled kRootLabel.
Tree with_root_marker(const Tree& tree);

// Re-verifies the three forest conditions from scratch on Tree values:
// the subsets partition S and rho, every component tree equals both
// restrictions, and the induced subtrees are vertex-disjoint in both trees.
// Returns a description of every failure.
std::vector<std::string> check_agreement_forest(const Tree& a, const Tree& b,
                                                const AgreementForest& forest);

struct SprResult {
  std::size_t distance = 0;  // components - 1
  AgreementForest forest;
};

// Maximum agreement forest by cut sets of the rho-augmented first tree in
// increasing size. Throws UnrootedInput, NotBinary, LabelSetMismatch,
// TooLarge (n > 10).
SprResult spr_distance_maf(const Tree& a, const Tree& b);

// Breadth-first search over rspr_apply moves. Throws TooLarge (n > 7),
// UnrootedInput, NotBinary, LabelSetMismatch.
std::size_t spr_distance_bfs(const Tree& a, const Tree& b);

// Every tree reachable from `a` (all rooted binary trees on its labels) with
// its move distance. Throws as spr_distance_bfs.
std::vector<std::pair<Tree, std::size_t>> spr_distances_bfs_from(const Tree& a);

}  // namespace treedist
