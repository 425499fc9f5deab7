#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "treedist/tree.hpp"

namespace treedist {

enum class TopologyKind { Resolved, Unresolved };

// Resolved quartets store the partner pair of the smallest label as
// `cherry`; resolved triplets store the cherry below the root. Pairs are
// sorted. Unresolved topologies leave `cherry` empty.
struct SubsetTopology {
  TopologyKind kind = TopologyKind::Unresolved;
  std::array<std::string, 2> cherry;

  friend bool operator==(const SubsetTopology&, const SubsetTopology&) = default;
};

// Throws SubsetSizeMismatch unless rooted trees get 3 labels and unrooted
// trees 4; UnknownLabel for labels outside the tree.
SubsetTopology induced_topology(const Tree& tree, std::span<const std::string> subset);

// Row: topology in A; column: topology in B.
struct CategoryTable {
  std::uint64_t agree = 0;         // A: both resolved, same pairing
  std::uint64_t disagree = 0;      // B: both resolved, different pairing
  std::uint64_t only_a = 0;        // C: resolved in A, unresolved in B
  std::uint64_t only_b = 0;        // D: unresolved in A, resolved in B
  std::uint64_t unresolved = 0;    // E: unresolved in both

  std::uint64_t total() const { return agree + disagree + only_a + only_b + unresolved; }
  std::uint64_t distance() const { return disagree + only_a + only_b; }
  friend bool operator==(const CategoryTable&, const CategoryTable&) = default;
};

// k = 3 needs two rooted trees, k = 4 two unrooted ones (RootednessMismatch
// otherwise; SubsetSizeMismatch for any other k). categorize reads topologies
// off leaf-pair distance tables and splits the enumeration across OpenMP
// workers; categorize_reference restricts the trees subset by subset.
CategoryTable categorize(const Tree& a, const Tree& b, int k);
CategoryTable categorize_serial(const Tree& a, const Tree& b, int k);
CategoryTable categorize_reference(const Tree& a, const Tree& b, int k);

std::uint64_t quartet_distance(const Tree& a, const Tree& b);
std::uint64_t triplet_distance(const Tree& a, const Tree& b);

// Sum over agreeing triplets of |d_A(i,j) - d_B(i,j)| + |d_A(i,k) - d_B(i,k)|
// where {i,j} is the cherry (i the smaller label) and k the outgroup; for
// unresolved triplets i < j < k. Path lengths include pendant edges.
// Throws UnweightedInput.
double triplet_length_distance(const Tree& a, const Tree& b);
double triplet_length_reference(const Tree& a, const Tree& b);

}  // namespace treedist
