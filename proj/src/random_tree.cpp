#include "treedist/random_tree.hpp"

#include "treedist/error.hpp"

namespace treedist {

namespace {

// Parent-array tree under construction: leaves first, internal vertices after.
struct Growing {
  std::vector<VertexId> parent;
  std::vector<std::string> labels;
  VertexId top = npos;

  // Hangs `leaf` from a new vertex subdividing the edge above `x`; x == top
  // subdivides the virtual edge above the top.
  void insert(VertexId x, std::string leaf) {
    const VertexId p = parent.size();
    parent.push_back(parent[x]);
    labels.emplace_back();
    parent[x] = p;
    parent.push_back(p);
    labels.push_back(std::move(leaf));
    if (x == top) top = p;
  }

  Tree build(bool rooted, const std::vector<double>& weights) const {
    return Tree::from_parents(parent, labels, weights, rooted);
  }
};

Growing seed(int n, bool rooted) {
  if (n < 2 || (!rooted && n < 3))
    fail(ErrorCode::DomainError, "too few leaves for a binary tree");
  Growing g;
  if (rooted) {
    g.parent = {npos, 0, 0};
    g.labels = {"", "1", "2"};
  } else {
    g.parent = {npos, 0, 0, 0};
    g.labels = {"", "1", "2", "3"};
  }
  g.top = 0;
  return g;
}

// Vertices whose parent edge can be subdivided (rooted trees add the top).
std::vector<VertexId> slots(const Growing& g, bool rooted) {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < g.parent.size(); ++v)
    if (v != g.top || rooted) out.push_back(v);
  return out;
}

}  // namespace

std::vector<std::string> numbered_labels(int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(std::to_string(i));
  return out;
}

Tree random_binary_tree(int n, std::mt19937_64& rng, bool rooted, bool weighted) {
  Growing g = seed(n, rooted);
  for (int k = rooted ? 3 : 4; k <= n; ++k) {
    const std::size_t choices = rooted ? g.parent.size() : g.parent.size() - 1;
    std::uniform_int_distribution<std::size_t> pick(0, choices - 1);
    std::size_t i = pick(rng);
    if (!rooted && i >= g.top) ++i;
    g.insert(i, std::to_string(k));
  }
  std::vector<double> weights;
  if (weighted) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    weights.resize(g.parent.size());
    for (auto& w : weights) w = 1.0 - u(rng);
  }
  return g.build(rooted, weights);
}

std::vector<Tree> all_binary_trees(int n, bool rooted) {
  std::vector<Growing> level{seed(n, rooted)};
  for (int k = rooted ? 3 : 4; k <= n; ++k) {
    std::vector<Growing> next;
    for (const auto& g : level) {
      for (VertexId x : slots(g, rooted)) {
        Growing h = g;
        h.insert(x, std::to_string(k));
        next.push_back(std::move(h));
      }
    }
    level = std::move(next);
  }
  std::vector<Tree> out;
  out.reserve(level.size());
  for (const auto& g : level) out.push_back(g.build(rooted, {}));
  return out;
}

Tree star_tree(int n, bool rooted) {
  if (n < 1) fail(ErrorCode::DomainError, "star needs at least one leaf");
  Tree t;
  const VertexId c = t.add_vertex();
  for (int i = 1; i <= n; ++i) t.add_edge(c, t.add_vertex(std::to_string(i)));
  if (rooted) t.set_root(c);
  return t;
}

}  // namespace treedist
