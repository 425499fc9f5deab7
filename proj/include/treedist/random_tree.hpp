#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "treedist/tree.hpp"

namespace treedist {

// "1", "2", ..., "n".
std::vector<std::string> numbered_labels(int n);

// Uniform binary tree by sequential leaf insertion on labels "1".."n".
// Weights, when requested, are drawn from (0, 1].
Tree random_binary_tree(int n, std::mt19937_64& rng, bool rooted, bool weighted = false);

// Every binary topology on "1".."n" exactly once: (2n-3)!! rooted trees or
// (2n-5)!! unrooted ones. Unweighted.
std::vector<Tree> all_binary_trees(int n, bool rooted);

// Star tree on "1".."n" (a root with n leaf children when rooted).
Tree star_tree(int n, bool rooted);

}  // namespace treedist
