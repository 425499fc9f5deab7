#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "treedist/tree.hpp"

namespace treedist {

// ---------------------------------------------------------------------------
// Maximum agreement subtree (rooted)

struct MastResult {
  std::size_t distance = 0;          // n - |witness|
  std::vector<std::string> witness;  // sorted
};

// Vertex-pair DP when both trees are binary after normalization, exhaustive
// subset search otherwise. Throws UnrootedInput, LabelSetMismatch, TooLarge
// (non-binary with n > 12).
MastResult mast_distance(const Tree& a, const Tree& b);

// Subsets by decreasing size until restrictions agree. Throws TooLarge for n > 12.
MastResult mast_oracle(const Tree& a, const Tree& b);

// ---------------------------------------------------------------------------
// Align

// max{min{a00, a11}, min{a01, a10}} over Jaccard ratios of the sides.
double align_edge_score(const Split& x, const Split& y);

struct AlignResult {
  double total = 0.0;
  std::vector<Split> edges_a;  // one entry per edge, pendant edges included
  std::vector<Split> edges_b;
  std::vector<std::vector<double>> scores;  // |edges_a| x |edges_b|
  // matching[i] indexes edges_b, or npos when edge i met a padding edge.
  std::vector<std::size_t> matching;
};

// Both trees are read unrooted with degree-2 vertices suppressed. Unequal
// edge counts are padded with zero-score edges. Throws LabelSetMismatch.
AlignResult align_score(const Tree& a, const Tree& b);

// ---------------------------------------------------------------------------
// Cophenetic correlation

// Class value of an internal vertex from its depth (root depth 0). Must be
// non-decreasing in depth; vertices at one depth share a value.
using ClassFn = std::function<double(std::size_t depth)>;

inline double depth_class(std::size_t depth) { return static_cast<double>(depth) + 1.0; }

struct CopheneticMatrix {
  LabelIndex labels;
  std::vector<std::vector<double>> values;  // symmetric, diagonal 0 and unused
};

// Entry (i, j) is the class value of the LCA of i and j. The tree is
// normalized first. Throws UnrootedInput, DomainError for a decreasing ClassFn.
CopheneticMatrix cophenetic_matrix(const Tree& tree, const ClassFn& class_fn = depth_class);

// Pearson correlation over the strict lower triangles. Throws
// DegenerateVariance, UnrootedInput, LabelSetMismatch.
double ccc(const Tree& a, const Tree& b, const ClassFn& class_fn = depth_class);

struct DistanceMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;
};

// Header row of labels, then one numeric row per label. A header starting
// with an empty cell means each row starts with its label. Throws
// SyntaxError, DomainError (not square or not symmetric).
DistanceMatrix read_distance_csv(std::istream& in);

// Pearson correlation between cr(tree) and the data distances. Throws as ccc.
double ccc_data(const Tree& tree, const DistanceMatrix& data, const ClassFn& class_fn = depth_class);

// ---------------------------------------------------------------------------
// Path-length and probability metrics

// Mean over unordered label pairs of |path_A - path_B|^k, path lengths in
// edges on normalized trees. Throws DomainError (k not 1 or 2, n < 2),
// LabelSetMismatch.
double node_distance(const Tree& a, const Tree& b, int k = 1);

// 1 - (S(A,B) + S(B,A)) / 2 with M_XY summing w(u) w(v) over non-root vertex
// pairs whose clades coincide. Throws UnrootedInput, UnweightedInput,
// ZeroTotalLength, LabelSetMismatch.
double similarity_probability_distance(const Tree& a, const Tree& b);

}  // namespace treedist
