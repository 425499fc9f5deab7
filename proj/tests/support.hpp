#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "treedist/newick.hpp"
#include "treedist/tree.hpp"

namespace treedist::testing {

inline Tree rooted(std::string_view text) {
  return parse_tree(text, {Rootedness::Rooted, true});
}

inline Tree unrooted(std::string_view text) {
  return parse_tree(text, {Rootedness::Unrooted, true});
}

inline std::vector<std::string> L(std::initializer_list<const char*> labels) {
  return {labels.begin(), labels.end()};
}

// Vertex carrying `label`.
inline VertexId vertex_of(const Tree& t, std::string_view label) {
  for (VertexId v = 0; v < t.vertex_count(); ++v)
    for (const auto& l : t.labels(v))
      if (l == label) return v;
  return npos;
}

// The edge above the tip labelled `label` (tips have exactly one edge).
inline EdgeId pendant_edge(const Tree& t, std::string_view label) {
  return t.incident(vertex_of(t, label))[0];
}

// Edge whose split puts exactly `side` on one side.
inline EdgeId edge_with_side(const Tree& t, std::vector<std::string> side) {
  std::sort(side.begin(), side.end());
  for (const auto& [e, s] : splits(t))
    if (s.side_a == side || s.side_b == side) return e;
  return npos;
}

}  // namespace treedist::testing
