#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "treedist/tree.hpp"

namespace treedist {

// Throws LabelSetMismatch when the two splits cover different label sets.
bool compatible(const Split& s1, const Split& s2);

// Internal splits with weights plus pendant weights. Rooted trees are read
// over S ∪ {"root"}: the cluster below each internal edge is one side and
// the other side carries the "root" marker.
struct SplitSet {
  std::map<Split, double> entries;
  std::map<std::string, double> leaf_weights;

  double norm() const;  // Euclidean norm over `entries`
};

// ||a|| + ||b||, pendant weights ignored.
double cone_path_length(const SplitSet& a, const SplitSet& b);

struct CommonSplit {
  Split split;
  double weight_a;
  double weight_b;
};

struct PendantPair {
  std::string label;
  double weight_a;
  double weight_b;
};

struct Decomposition {
  bool rooted = false;
  std::vector<CommonSplit> common;
  std::vector<PendantPair> pendants;
  SplitSet a_unique;
  SplitSet b_unique;
};

// Trees are normalized first (degree-2 vertices suppressed, root kept).
// Unweighted trees read every edge as weight 1. Zero-weight internal edges
// are dropped. Throws LabelSetMismatch, RootednessMismatch.
Decomposition decompose(const Tree& a, const Tree& b);

struct GeodesicOptions {
  bool include_pendants = true;
};

// One block pair of the support, with the norm of each side.
struct SupportBlock {
  std::vector<Split> a;
  std::vector<Split> b;
  double norm_a = 0.0;
  double norm_b = 0.0;
};

struct GeodesicResult {
  double length = 0.0;
  // Ordered block pairs; ||A_i|| / ||B_i|| is non-decreasing.
  std::vector<SupportBlock> support;
  // Unique splits compatible with every split of the other tree. They move
  // linearly to or from zero, independent of the blocks.
  std::vector<Split> a_free;
  std::vector<Split> b_free;
  // Squared contributions folded into `length`.
  double common_squared = 0.0;   // common internal splits
  double free_squared = 0.0;     // a_free and b_free
  double pendant_squared = 0.0;  // zero when pendants are excluded
  std::size_t iterations = 0;
  Decomposition decomposition;
  GeodesicOptions options;
};

// Iterative support refinement from the cone path. Each step splits a block
// pair by a minimum-weight vertex cover of its incompatibility graph (cover
// weights w^2 / ||A_i||^2 and w^2 / ||B_i||^2) when the cover weighs less
// than 1. Throws NonConvergence if the refinement count exceeds the number of
// unique splits.
GeodesicResult geodesic_distance(const Tree& a, const Tree& b, const GeodesicOptions& options = {});

// Minimum over every support pair satisfying P1, with P2 enforced by merging
// adjacent out-of-order blocks. Throws TooLarge above 5 unique splits a side.
double geodesic_oracle(const Tree& a, const Tree& b, const GeodesicOptions& options = {});

// Tree at fraction t of the geodesic (constant speed). Splits whose weight
// reaches zero are absent. Pendant weights interpolate linearly even when
// they are excluded from the length. Throws DomainError for t outside [0, 1].
Tree interior_point(const GeodesicResult& result, double t);

// Tree realising a pairwise compatible weighted split set (Split Equivalence).
// Throws DomainError when two splits are incompatible.
Tree tree_from_splits(const SplitSet& splits, bool rooted);

}  // namespace treedist
