#include "treedist/spr.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <map>
#include <set>

#include "treedist/error.hpp"

namespace treedist {

namespace {

RootedView rooted_binary_view(const Tree& t) {
  if (!t.rooted()) fail(ErrorCode::UnrootedInput, "SPR needs rooted trees");
  RootedView view = hang_at_root(t);
  for (VertexId v : view.preorder)
    if (!view.is_leaf(v) && view.children[v].size() != 2)
      fail(ErrorCode::NotBinary, "SPR needs binary trees");
  return view;
}

// Child endpoint of `e` under `view`.
VertexId lower_end(const Tree& t, const RootedView& view, EdgeId e) {
  const Edge& ed = t.edge(e);
  return view.parent[ed.child] == ed.parent ? ed.child : ed.parent;
}

// Legality of a move whose target edge ends at `y`, the root for kRootEdge.
bool legal(const RootedView& view, VertexId u, VertexId y) {
  if (u == view.top) return false;
  for (VertexId x = y; x != npos; x = view.parent[x])
    if (x == u) return false;
  const VertexId p = view.parent[u];
  const auto& ch = view.children[p];
  const VertexId s = ch[0] == u ? ch[1] : ch[0];
  return y != p && y != s;
}

Tree apply_move(const Tree& t, const RootedView& view, VertexId u, VertexId y) {
  const std::size_t n = t.vertex_count();
  std::vector<VertexId> parent(view.parent.begin(), view.parent.end());
  std::vector<double> weight(n, 0.0);
  std::vector<std::string> labels(n);
  for (VertexId v = 0; v < n; ++v) {
    labels[v] = t.label(v);
    if (v != view.top) weight[v] = t.weight(view.parent_edge[v]);
  }
  const VertexId p = parent[u];
  const VertexId s = view.children[p][0] == u ? view.children[p][1] : view.children[p][0];
  const VertexId g = parent[p];
  // Suppress p: s hangs from g directly.
  parent[s] = g;
  weight[s] = g == npos ? 0.0 : weight[s] + weight[p];
  // p's slot becomes the vertex subdividing the edge above y.
  parent[p] = parent[y];
  weight[p] = 0.0;
  parent[y] = p;
  return Tree::from_parents(parent, labels, t.weighted() ? std::span<const double>(weight)
                                                         : std::span<const double>{},
                            true);
}

using Key = std::vector<LeafSet>;

Key cluster_key(const Tree& t, const LabelIndex& index) {
  const RootedView view = hang_at_root(t);
  Key key = subtree_leaf_sets(t, view, index);
  std::sort(key.begin(), key.end());
  return key;
}

}  // namespace

Tree rspr_apply(const Tree& tree, VertexId pruned, EdgeId target_edge) {
  const RootedView view = rooted_binary_view(tree);
  if (pruned >= tree.vertex_count()) fail(ErrorCode::DomainError, "no such vertex");
  if (pruned == view.top) fail(ErrorCode::RootPrune, "cannot prune the root");
  if (target_edge != kRootEdge && target_edge >= tree.edge_count())
    fail(ErrorCode::EdgeNotFound, "no such edge");
  const VertexId y = target_edge == kRootEdge ? view.top : lower_end(tree, view, target_edge);
  if (!legal(view, pruned, y))
    fail(ErrorCode::InvalidTarget, "target edge lies in the pruned clade or touches its parent");
  return apply_move(tree, view, pruned, y);
}

std::vector<Tree> rspr_neighbors(const Tree& tree) {
  const RootedView view = rooted_binary_view(tree);
  const LabelIndex index = LabelIndex::of(tree);
  std::set<Key> seen{cluster_key(tree, index)};
  std::vector<Tree> out;
  for (VertexId u = 0; u < tree.vertex_count(); ++u) {
    if (u == view.top) continue;
    for (VertexId y = 0; y < tree.vertex_count(); ++y) {
      if (!legal(view, u, y)) continue;
      Tree next = apply_move(tree, view, u, y);
      if (seen.insert(cluster_key(next, index)).second) out.push_back(std::move(next));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Agreement forests

Tree with_root_marker(const Tree& tree) {
  if (!tree.rooted()) fail(ErrorCode::UnrootedInput, "root marker needs a rooted tree");
  Tree out = tree;
  const VertexId top = out.add_vertex();
  const VertexId rho = out.add_vertex(std::string(kRootLabel));
  out.add_edge(top, *tree.root());
  out.add_edge(top, rho);
  out.set_root(top);
  return out;
}

namespace {

// Vertices of the minimal subtree spanning `labels`.
std::set<VertexId> induced_vertices(const Tree& t, const RootedView& view,
                                    const std::vector<std::string>& labels) {
  std::vector<std::size_t> depth(t.vertex_count(), 0);
  for (VertexId v : view.preorder)
    if (v != view.top) depth[v] = depth[view.parent[v]] + 1;
  std::vector<VertexId> leaves;
  for (VertexId v = 0; v < t.vertex_count(); ++v)
    if (t.is_tip(v) && std::binary_search(labels.begin(), labels.end(), t.label(v))) leaves.push_back(v);
  std::set<VertexId> out;
  if (leaves.empty()) return out;
  VertexId lca = leaves[0];
  for (VertexId x : leaves) {
    VertexId p = lca, q = x;
    while (depth[p] > depth[q]) p = view.parent[p];
    while (depth[q] > depth[p]) q = view.parent[q];
    while (p != q) {
      p = view.parent[p];
      q = view.parent[q];
    }
    lca = p;
  }
  for (VertexId x : leaves)
    for (VertexId v = x;; v = view.parent[v]) {
      out.insert(v);
      if (v == lca) break;
    }
  return out;
}

}  // namespace

std::vector<std::string> check_agreement_forest(const Tree& a, const Tree& b,
                                                const AgreementForest& forest) {
  std::vector<std::string> problems;
  const Tree ar = with_root_marker(a), br = with_root_marker(b);
  const std::vector<std::string> all = ar.leaf_labels();
  std::vector<std::string> covered;
  for (const auto& c : forest.components) covered.insert(covered.end(), c.labels.begin(), c.labels.end());
  std::sort(covered.begin(), covered.end());
  if (covered != all) problems.push_back("components do not partition the labels and the root marker");

  for (std::size_t i = 0; i < forest.components.size(); ++i) {
    const auto& c = forest.components[i];
    if (!std::is_sorted(c.labels.begin(), c.labels.end()))
      problems.push_back("component " + std::to_string(i) + " labels are not sorted");
    if (!is_identical(c.tree, restrict_to(ar, c.labels)))
      problems.push_back("component " + std::to_string(i) + " differs from the first restriction");
    if (!is_identical(c.tree, restrict_to(br, c.labels)))
      problems.push_back("component " + std::to_string(i) + " differs from the second restriction");
  }

  for (const auto* t : {&ar, &br}) {
    const RootedView view = hang_at_root(*t);
    std::vector<std::set<VertexId>> parts;
    for (const auto& c : forest.components) parts.push_back(induced_vertices(*t, view, c.labels));
    for (std::size_t i = 0; i < parts.size(); ++i)
      for (std::size_t j = i + 1; j < parts.size(); ++j)
        for (VertexId v : parts[i])
          if (parts[j].count(v)) {
            problems.push_back("components " + std::to_string(i) + " and " + std::to_string(j) +
                               " share a vertex");
            break;
          }
  }
  return problems;
}

namespace {

// Bit-parallel view of a rho-augmented tree with at most 32 vertices.
struct Masks {
  std::vector<std::uint32_t> cluster;  // per vertex, over label indices
  std::vector<VertexId> parent;
  std::vector<VertexId> preorder;
  std::vector<char> leaf;
  VertexId top = npos;
};

Masks masks_of(const Tree& t, const LabelIndex& index) {
  const RootedView view = hang_at_root(t);
  const auto sets = subtree_leaf_sets(t, view, index);
  Masks m;
  m.parent = view.parent;
  m.preorder = view.preorder;
  m.top = view.top;
  for (VertexId v = 0; v < t.vertex_count(); ++v) m.leaf.push_back(view.is_leaf(v));
  m.cluster.resize(t.vertex_count(), 0);
  for (VertexId v = 0; v < t.vertex_count(); ++v)
    for (std::size_t i : sets[v].members()) m.cluster[v] |= std::uint32_t{1} << i;
  return m;
}

std::vector<std::uint32_t> restricted_clusters(const Masks& m, std::uint32_t s) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t c : m.cluster)
    if (c & s) out.push_back(c & s);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::uint32_t induced_mask(const Masks& m, std::uint32_t s) {
  // The LCA holds the smallest cluster containing s.
  std::uint32_t lca = ~std::uint32_t{0};
  for (std::uint32_t c : m.cluster)
    if ((c & s) == s && std::popcount(c) < std::popcount(lca)) lca = c;
  std::uint32_t out = 0;
  for (VertexId v = 0; v < m.cluster.size(); ++v)
    if ((m.cluster[v] & s) && (m.cluster[v] & ~lca) == 0) out |= std::uint32_t{1} << v;
  return out;
}

bool valid_forest(const Masks& a, const Masks& b, const std::vector<std::uint32_t>& parts) {
  std::uint32_t used_a = 0, used_b = 0;
  for (std::uint32_t s : parts) {
    if (restricted_clusters(a, s) != restricted_clusters(b, s)) return false;
    const std::uint32_t va = induced_mask(a, s), vb = induced_mask(b, s);
    if ((va & used_a) || (vb & used_b)) return false;
    used_a |= va;
    used_b |= vb;
  }
  return true;
}

// Label masks of the pieces left after cutting the edges above `cut`
// vertices; empty when some piece carries no label.
std::vector<std::uint32_t> pieces(const Masks& m, const std::vector<VertexId>& edges,
                                  std::uint32_t cut) {
  std::vector<VertexId> head(m.parent.size(), npos);
  std::vector<char> is_cut(m.parent.size(), 0);
  for (std::size_t i = 0; i < edges.size(); ++i)
    if (cut >> i & 1) is_cut[edges[i]] = 1;
  std::map<VertexId, std::uint32_t> label_mask;
  for (VertexId v : m.preorder) {
    head[v] = (v == m.top || is_cut[v]) ? v : head[m.parent[v]];
    label_mask[head[v]] |= m.leaf[v] ? m.cluster[v] : 0;
  }
  std::vector<std::uint32_t> out;
  for (const auto& [h, mask] : label_mask) {
    if (mask == 0) return {};
    out.push_back(mask);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SprResult spr_distance_maf(const Tree& a, const Tree& b) {
  rooted_binary_view(a);
  rooted_binary_view(b);
  const LabelIndex shared = shared_labels(a, b);
  if (shared.size() > 10) fail(ErrorCode::TooLarge, "agreement forest search handles n <= 10");
  const Tree ar = with_root_marker(a), br = with_root_marker(b);
  const LabelIndex index = LabelIndex::of(ar);
  const Masks ma = masks_of(ar, index), mb = masks_of(br, index);

  std::vector<VertexId> edges;  // edge above each non-top vertex
  for (VertexId v : ma.preorder)
    if (v != ma.top) edges.push_back(v);
  const std::size_t e = edges.size();

  for (std::size_t cuts = 0; cuts <= e; ++cuts) {
    std::set<std::vector<std::uint32_t>> tried;
    // Gosper's hack over cut sets of this size, in increasing order.
    std::uint32_t set = cuts == 0 ? 0 : (std::uint32_t{1} << cuts) - 1;
    const std::uint32_t limit = std::uint32_t{1} << e;
    while (set < limit) {
      auto parts = pieces(ma, edges, set);
      if (!parts.empty() && tried.insert(parts).second && valid_forest(ma, mb, parts)) {
        SprResult r;
        r.distance = parts.size() - 1;
        for (std::uint32_t s : parts) {
          ForestComponent c;
          for (std::size_t i = 0; i < index.size(); ++i)
            if (s >> i & 1) c.labels.push_back(index.label(i));
          c.tree = restrict_to(ar, c.labels);
          r.forest.components.push_back(std::move(c));
        }
        return r;
      }
      if (set == 0) break;
      const std::uint32_t lowest = set & (~set + 1);
      const std::uint32_t ripple = set + lowest;
      set = (((ripple ^ set) >> 2) / lowest) | ripple;
    }
  }
  fail(ErrorCode::NonConvergence, "no agreement forest found");
}

// ---------------------------------------------------------------------------
// Breadth-first search

namespace {

std::map<Key, std::size_t> bfs(const Tree& a, const Key* stop, std::vector<Tree>* trees) {
  rooted_binary_view(a);
  const LabelIndex index = LabelIndex::of(a);
  if (index.size() > 7) fail(ErrorCode::TooLarge, "SPR search handles n <= 7");
  std::map<Key, std::size_t> dist;
  std::deque<Tree> queue{a};
  const Key start = cluster_key(a, index);
  dist[start] = 0;
  if (trees) trees->push_back(a);
  if (stop && *stop == start) return dist;
  while (!queue.empty()) {
    const Tree t = std::move(queue.front());
    queue.pop_front();
    const std::size_t d = dist.at(cluster_key(t, index));
    for (Tree& next : rspr_neighbors(t)) {
      Key k = cluster_key(next, index);
      if (dist.count(k)) continue;
      const bool done = stop && *stop == k;
      dist.emplace(std::move(k), d + 1);
      if (done) return dist;
      if (trees) trees->push_back(next);
      queue.push_back(std::move(next));
    }
  }
  return dist;
}

}  // namespace

std::size_t spr_distance_bfs(const Tree& a, const Tree& b) {
  rooted_binary_view(b);
  const LabelIndex index = shared_labels(a, b);
  const Key goal = cluster_key(b, index);
  return bfs(a, &goal, nullptr).at(goal);
}

std::vector<std::pair<Tree, std::size_t>> spr_distances_bfs_from(const Tree& a) {
  std::vector<Tree> trees;
  const auto dist = bfs(a, nullptr, &trees);
  const LabelIndex index = LabelIndex::of(a);
  std::vector<std::pair<Tree, std::size_t>> out;
  for (auto& t : trees) {
    const std::size_t d = dist.at(cluster_key(t, index));
    out.emplace_back(std::move(t), d);
  }
  return out;
}

}  // namespace treedist
