#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "treedist/tree.hpp"

namespace treedist {

enum class Rootedness { Auto, Rooted, Unrooted };

struct ParseOptions {
  // Auto: a top-level vertex of degree 2 makes the tree rooted.
  Rootedness rootedness = Rootedness::Auto;
  // Strict mode rejects "(x)" groups with a single child; lenient mode
  // suppresses them, adding weights along the chain.
  bool strict = true;
};

struct NewickDocument {
  std::vector<Tree> trees;
  std::vector<std::size_t> source_positions;  // byte offset of each tree
  std::vector<std::string> warnings;
};

// Throws ParseError (SyntaxError, NegativeWeight, DuplicateLabel, EmptyInput).
NewickDocument parse(std::string_view text, const ParseOptions& options = {});

// Exactly one tree; anything else is a SyntaxError.
Tree parse_tree(std::string_view text, const ParseOptions& options = {});

// Weight format for serialize: shortest text that parses back to the same
// double.
inline constexpr int kExactWeights = -1;

// Canonical child order; weights printed in fixed notation with `precision`
// decimals, or exactly for kExactWeights; unweighted trees carry no ":w"
// suffixes.
std::string serialize(const Tree& tree, int precision = 6);

}  // namespace treedist
