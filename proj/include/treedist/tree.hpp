#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "treedist/leaf_set.hpp"

namespace treedist {

using VertexId = std::size_t;
using EdgeId = std::size_t;
inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

// The label reserved for the root marker; never a leaf label.
inline constexpr std::string_view kRootLabel = "root";

// An edge is stored with an orientation. For rooted trees `parent` is the
// endpoint closer to the root; for unrooted trees the orientation only
// records construction order.
struct Edge {
  VertexId parent;
  VertexId child;
  double weight;
};

// Vertex/edge structure with leaf labels and optional edge weights.
//
// A Tree is a plain value. Construction goes through add_vertex/add_edge;
// nothing is checked at that point, so invalid shapes can be represented and
// reported by validate(). Every algorithm in the library treats its input as
// immutable.
class Tree {
 public:
  Tree() = default;

  VertexId add_vertex(std::string label = {});
  VertexId add_vertex(std::vector<std::string> labels);
  EdgeId add_edge(VertexId parent, VertexId child, double weight = 0.0);
  void set_root(VertexId v) { root_ = v; }
  void clear_root() { root_.reset(); }
  void set_weighted(bool weighted) { weighted_ = weighted; }
  void set_weight(EdgeId e, double w) { edges_[e].weight = w; }

  // Builds a tree from a parent array (npos marks the top vertex). Edge i of
  // the result is created in vertex order, skipping the top.
  static Tree from_parents(std::span<const VertexId> parent,
                           std::span<const std::string> labels,
                           std::span<const double> weights, bool rooted);

  std::size_t vertex_count() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::span<const EdgeId> incident(VertexId v) const { return incident_[v]; }
  std::size_t degree(VertexId v) const { return incident_[v].size(); }
  VertexId other_end(EdgeId e, VertexId v) const {
    return edges_[e].parent == v ? edges_[e].child : edges_[e].parent;
  }

  const std::vector<std::string>& labels(VertexId v) const { return labels_[v]; }
  // First label of v, or the empty string.
  const std::string& label(VertexId v) const;
  bool has_label(VertexId v) const { return !labels_[v].empty(); }

  bool rooted() const noexcept { return root_.has_value(); }
  std::optional<VertexId> root() const noexcept { return root_; }
  bool weighted() const noexcept { return weighted_; }
  double weight(EdgeId e) const { return edges_[e].weight; }

  // Tips: degree <= 1 vertices, excluding a rooted tree's root unless the
  // tree is a single vertex.
  bool is_tip(VertexId v) const;
  std::vector<VertexId> tips() const;
  std::size_t tip_count() const;
  // Sorted labels of all tips.
  std::vector<std::string> leaf_labels() const;

 private:
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<EdgeId>> incident_;
  std::vector<Edge> edges_;
  std::optional<VertexId> root_;
  bool weighted_ = false;
};

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  EmptyTree,
  EdgeCountMismatch,
  Disconnected,
  BadEndpoint,
  UnlabeledLeaf,
  LabeledInternal,
  DuplicateLabel,
  ReservedLabel,
  EmptyLabel,
  NegativeWeight,
  BadRoot,
};

struct Violation {
  ViolationKind kind;
  std::string detail;
  VertexId vertex = npos;
  EdgeId edge = npos;

  friend bool operator==(const Violation&, const Violation&) = default;
};

std::string_view violation_name(ViolationKind kind);

// Empty iff every structural invariant holds.
std::vector<Violation> validate(const Tree& tree);

// ---------------------------------------------------------------------------
// Label bookkeeping

// Sorted, duplicate-free label universe shared by the trees being compared.
class LabelIndex {
 public:
  LabelIndex() = default;
  explicit LabelIndex(std::vector<std::string> labels);

  // Labels of the tips of `tree`; throws DuplicateLabel / DomainError when
  // tips repeat a label or carry none.
  static LabelIndex of(const Tree& tree);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::optional<std::size_t> find(std::string_view label) const;
  // Throws UnknownLabel.
  std::size_t at(std::string_view label) const;

  friend bool operator==(const LabelIndex& a, const LabelIndex& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

// Throws LabelSetMismatch unless both trees carry the same tip labels.
LabelIndex shared_labels(const Tree& a, const Tree& b);

// Vertex -> leaf index (npos for non-tips).
std::vector<std::size_t> tip_indices(const Tree& tree, const LabelIndex& index);

// ---------------------------------------------------------------------------
// Traversal

// A tree hung from a chosen top vertex.
struct RootedView {
  VertexId top = npos;
  std::vector<VertexId> parent;
  std::vector<EdgeId> parent_edge;
  std::vector<std::vector<VertexId>> children;
  std::vector<VertexId> preorder;

  bool is_leaf(VertexId v) const { return children[v].empty(); }
};

RootedView hang(const Tree& tree, VertexId top);
// Hangs a rooted tree from its root; throws UnrootedInput otherwise.
RootedView hang_at_root(const Tree& tree);

// Children ordered by smallest label in each subtree. Unrooted trees are hung
// from the vertex carrying the smallest label, which makes the result a
// function of the isomorphism class only.
RootedView canonical_view(const Tree& tree);
// Same ordering, hung from a caller-chosen top.
RootedView canonical_view(const Tree& tree, VertexId top);

// ---------------------------------------------------------------------------
// Clusters and splits

struct Cluster {
  std::vector<std::string> labels;  // sorted

  friend auto operator<=>(const Cluster&, const Cluster&) = default;
};

// Unordered bipartition; stored with sorted sides, side_a holding the
// bytewise-smallest label.
struct Split {
  Split() = default;
  Split(std::vector<std::string> one, std::vector<std::string> other);

  std::vector<std::string> side_a;
  std::vector<std::string> side_b;

  friend auto operator<=>(const Split&, const Split&) = default;
};

// One cluster per clade below an edge, singletons included, S excluded.
std::set<Cluster> clusters(const Tree& tree);

// Split of every edge whose removal leaves tips on both sides, keyed by edge.
// Rooted trees are read as unrooted: both edges at a degree-2 root carry the
// same split.
std::map<EdgeId, Split> splits(const Tree& tree);

// Leaf set below every vertex of `view` (indices from `index`).
std::vector<LeafSet> subtree_leaf_sets(const Tree& tree, const RootedView& view,
                                       const LabelIndex& index);

// ---------------------------------------------------------------------------
// Rewrites

// Collapses `e`, merging its endpoints into a new vertex appended last. The
// contracted edge's weight is dropped.
Tree contract(const Tree& tree, EdgeId e);

// Minimal connecting subtree on `subset` with non-root degree-2 vertices
// suppressed (weights of merged edges add). Rooted inputs are re-rooted at
// the subset's least common ancestor.
Tree restrict_to(const Tree& tree, std::span<const std::string> subset);

// Suppresses degree-2 vertices. With keep_root, a rooted tree keeps a root
// (moved down past any single-child chain); otherwise the result is the
// unrooted reading of the tree.
Tree suppress_unary(const Tree& tree, bool keep_root = true);

// ---------------------------------------------------------------------------
// Identity

bool is_identical(const Tree& a, const Tree& b);
// Weights compared with absolute tolerance `tolerance`.
bool is_weight_identical(const Tree& a, const Tree& b, double tolerance = 0.0);

// (2n-3)!!; throws DomainError for n < 2 or when the value overflows 64 bits.
std::uint64_t count_binary_topologies(int n);

}  // namespace treedist
