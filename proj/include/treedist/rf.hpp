#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "treedist/tree.hpp"

namespace treedist {

struct RfDetail {
  std::size_t distance = 0;
  std::size_t clusters_a = 0;  // |C_A|
  std::size_t clusters_b = 0;  // |C_B|
  std::size_t shared = 0;      // |C_A ∩ C_B|
};

// Rooted pairs compare clusters (singletons included, S excluded); unrooted
// pairs compare non-trivial splits. Linear time: leaves are ranked in a
// preorder of the first tree, whose clusters become rank intervals held in
// Day's two-array table; the second tree's clusters are looked up there.
// Throws LabelSetMismatch, or UnrootedInput when exactly one tree is rooted.
RfDetail rf_detail(const Tree& a, const Tree& b);
std::size_t rf_distance(const Tree& a, const Tree& b);

// Explicit set construction and symmetric difference.
std::size_t rf_distance_oracle(const Tree& a, const Tree& b);

// Smallest rooted tree whose clusters are those shared by every input.
// Unweighted. Throws EmptyInput, UnrootedInput, LabelSetMismatch.
Tree strict_consensus(std::span<const Tree> trees);

struct RflMatch {
  Split split;
  double weight_a;
  double weight_b;
};

struct RflResult {
  double value = 0.0;
  double unmatched_a = 0.0;  // total weight of E_A \ E'_A
  double unmatched_b = 0.0;
  std::vector<RflMatch> matched;
};

// Default mode reads both trees unrooted with every degree-2 vertex
// suppressed, where each split labels at most one edge. Raw mode keeps the
// trees as given and throws AmbiguousMatchingError when several matching
// functions exist. Throws UnweightedInput, LabelSetMismatch.
RflResult rfl_distance(const Tree& a, const Tree& b, bool raw = false);

// ---------------------------------------------------------------------------
// Metric axioms over a sample

struct AxiomViolation {
  std::string axiom;  // "non-negativity", "identity", "symmetry", "triangle"
  std::size_t i = 0, j = 0, k = 0;
  double lhs = 0.0, rhs = 0.0;
};

using DistanceFn = std::function<double(const Tree&, const Tree&)>;

// Checks every pair and triple of `sample`. Identity means d = 0 exactly
// when is_identical holds. Throws DomainError for fewer than 3 trees.
std::vector<AxiomViolation> check_metric_axioms(std::span<const Tree> sample,
                                                const DistanceFn& distance,
                                                double tolerance = 1e-9);

std::vector<AxiomViolation> rf_is_metric_suite(std::span<const Tree> sample);

}  // namespace treedist
