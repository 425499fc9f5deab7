#include "treedist/tree.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "treedist/error.hpp"

namespace treedist {

namespace {
const std::string kEmpty;
}

VertexId Tree::add_vertex(std::string label) {
  std::vector<std::string> labels;
  if (!label.empty()) labels.push_back(std::move(label));
  return add_vertex(std::move(labels));
}

VertexId Tree::add_vertex(std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end());
  labels_.push_back(std::move(labels));
  incident_.emplace_back();
  return labels_.size() - 1;
}

EdgeId Tree::add_edge(VertexId parent, VertexId child, double weight) {
  edges_.push_back(Edge{parent, child, weight});
  const EdgeId e = edges_.size() - 1;
  if (parent < incident_.size()) incident_[parent].push_back(e);
  if (child < incident_.size() && child != parent) incident_[child].push_back(e);
  return e;
}

Tree Tree::from_parents(std::span<const VertexId> parent,
                        std::span<const std::string> labels,
                        std::span<const double> weights, bool rooted) {
  Tree t;
  t.labels_.reserve(parent.size());
  t.incident_.reserve(parent.size());
  t.edges_.reserve(parent.empty() ? 0 : parent.size() - 1);
  VertexId top = npos;
  for (std::size_t v = 0; v < parent.size(); ++v) {
    t.add_vertex(v < labels.size() ? labels[v] : std::string{});
  }
  for (std::size_t v = 0; v < parent.size(); ++v) {
    if (parent[v] == npos) {
      top = v;
      continue;
    }
    t.add_edge(parent[v], v, weights.empty() ? 0.0 : weights[v]);
  }
  t.weighted_ = !weights.empty();
  if (rooted && top != npos) t.root_ = top;
  return t;
}

const std::string& Tree::label(VertexId v) const {
  return labels_[v].empty() ? kEmpty : labels_[v].front();
}

bool Tree::is_tip(VertexId v) const {
  if (root_ && *root_ == v) return vertex_count() == 1;
  return incident_[v].size() <= 1;
}

std::vector<VertexId> Tree::tips() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < vertex_count(); ++v)
    if (is_tip(v)) out.push_back(v);
  return out;
}

std::size_t Tree::tip_count() const {
  std::size_t c = 0;
  for (VertexId v = 0; v < vertex_count(); ++v) c += is_tip(v) ? 1 : 0;
  return c;
}

std::vector<std::string> Tree::leaf_labels() const {
  std::vector<std::string> out;
  for (VertexId v = 0; v < vertex_count(); ++v)
    if (is_tip(v))
      for (const auto& l : labels_[v]) out.push_back(l);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

std::string_view violation_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::EmptyTree: return "EmptyTree";
    case ViolationKind::EdgeCountMismatch: return "EdgeCountMismatch";
    case ViolationKind::Disconnected: return "Disconnected";
    case ViolationKind::BadEndpoint: return "BadEndpoint";
    case ViolationKind::UnlabeledLeaf: return "UnlabeledLeaf";
    case ViolationKind::LabeledInternal: return "LabeledInternal";
    case ViolationKind::DuplicateLabel: return "DuplicateLabel";
    case ViolationKind::ReservedLabel: return "ReservedLabel";
    case ViolationKind::EmptyLabel: return "EmptyLabel";
    case ViolationKind::NegativeWeight: return "NegativeWeight";
    case ViolationKind::BadRoot: return "BadRoot";
  }
  return "Unknown";
}

std::vector<Violation> validate(const Tree& tree) {
  std::vector<Violation> out;
  const std::size_t n = tree.vertex_count();
  if (n == 0) {
    out.push_back({ViolationKind::EmptyTree, "tree has no vertices"});
    return out;
  }
  bool endpoints_ok = true;
  for (EdgeId e = 0; e < tree.edge_count(); ++e) {
    const auto& ed = tree.edge(e);
    if (ed.parent >= n || ed.child >= n || ed.parent == ed.child) {
      out.push_back({ViolationKind::BadEndpoint, "edge endpoint out of range or loop",
                     npos, e});
      endpoints_ok = false;
    }
  }
  if (tree.root() && *tree.root() >= n) {
    out.push_back({ViolationKind::BadRoot, "root vertex out of range"});
    return out;
  }
  if (tree.edge_count() + 1 != n) {
    out.push_back({ViolationKind::EdgeCountMismatch,
                   std::to_string(tree.edge_count()) + " edges for " +
                       std::to_string(n) + " vertices"});
  }
  if (endpoints_ok) {
    std::vector<char> seen(n, 0);
    std::vector<VertexId> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      for (EdgeId e : tree.incident(v)) {
        const VertexId w = tree.other_end(e, v);
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      }
    }
    for (VertexId v = 0; v < n; ++v) {
      if (!seen[v]) {
        out.push_back({ViolationKind::Disconnected, "vertex unreachable", v});
        break;
      }
    }
  }
  std::unordered_set<std::string> seen_labels;
  for (VertexId v = 0; v < n; ++v) {
    const bool tip = tree.is_tip(v);
    if (tip && !tree.has_label(v)) {
      out.push_back({ViolationKind::UnlabeledLeaf, "leaf without label", v});
    }
    if (!tip && tree.has_label(v)) {
      out.push_back({ViolationKind::LabeledInternal,
                     "internal vertex labelled '" + tree.label(v) + "'", v});
    }
    for (const auto& l : tree.labels(v)) {
      if (l.empty()) {
        out.push_back({ViolationKind::EmptyLabel, "empty label", v});
      } else if (l == kRootLabel) {
        out.push_back({ViolationKind::ReservedLabel, l, v});
      } else if (!seen_labels.insert(l).second) {
        out.push_back({ViolationKind::DuplicateLabel, l, v});
      }
    }
  }
  if (tree.weighted()) {
    for (EdgeId e = 0; e < tree.edge_count(); ++e) {
      if (!(tree.weight(e) >= 0.0)) {
        out.push_back({ViolationKind::NegativeWeight,
                       "weight " + std::to_string(tree.weight(e)), npos, e});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

LabelIndex::LabelIndex(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end());
  lookup_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!lookup_.emplace(labels_[i], i).second) {
      fail(ErrorCode::DuplicateLabel, "duplicate label '" + labels_[i] + "'");
    }
  }
}

LabelIndex LabelIndex::of(const Tree& tree) {
  std::vector<std::string> labels;
  labels.reserve(tree.vertex_count() / 2 + 1);
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (!tree.is_tip(v)) continue;
    if (!tree.has_label(v)) fail(ErrorCode::DomainError, "tree has an unlabelled tip");
    labels.push_back(tree.label(v));
  }
  return LabelIndex(std::move(labels));
}

std::optional<std::size_t> LabelIndex::find(std::string_view label) const {
  auto it = lookup_.find(std::string(label));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t LabelIndex::at(std::string_view label) const {
  auto i = find(label);
  if (!i) fail(ErrorCode::UnknownLabel, "unknown label '" + std::string(label) + "'");
  return *i;
}

LabelIndex shared_labels(const Tree& a, const Tree& b) {
  LabelIndex ia = LabelIndex::of(a);
  LabelIndex ib = LabelIndex::of(b);
  if (!(ia == ib)) {
    fail(ErrorCode::LabelSetMismatch, "trees carry different leaf label sets (" +
                                          std::to_string(ia.size()) + " vs " +
                                          std::to_string(ib.size()) + " labels)");
  }
  return ia;
}

std::vector<std::size_t> tip_indices(const Tree& tree, const LabelIndex& index) {
  std::vector<std::size_t> out(tree.vertex_count(), npos);
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (tree.is_tip(v) && tree.has_label(v)) out[v] = index.at(tree.label(v));
  }
  return out;
}

// ---------------------------------------------------------------------------

RootedView hang(const Tree& tree, VertexId top) {
  const std::size_t n = tree.vertex_count();
  RootedView view;
  view.top = top;
  view.parent.assign(n, npos);
  view.parent_edge.assign(n, npos);
  view.children.assign(n, {});
  view.preorder.reserve(n);
  if (n == 0) return view;
  std::vector<char> seen(n, 0);
  std::vector<VertexId> stack{top};
  seen[top] = 1;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    view.preorder.push_back(v);
    const auto inc = tree.incident(v);
    for (EdgeId e : inc) {
      const VertexId w = tree.other_end(e, v);
      if (seen[w]) continue;
      seen[w] = 1;
      view.parent[w] = v;
      view.parent_edge[w] = e;
      view.children[v].push_back(w);
    }
    for (auto it = view.children[v].rbegin(); it != view.children[v].rend(); ++it)
      stack.push_back(*it);
  }
  return view;
}

RootedView hang_at_root(const Tree& tree) {
  if (!tree.rooted()) fail(ErrorCode::UnrootedInput, "operation requires a rooted tree");
  return hang(tree, *tree.root());
}

namespace {

void rebuild_preorder(RootedView& view) {
  view.preorder.clear();
  std::vector<VertexId> stack{view.top};
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    view.preorder.push_back(v);
    const auto& ch = view.children[v];
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
  }
}

RootedView sorted_view(const Tree& tree, VertexId top) {
  RootedView view = hang(tree, top);
  const std::size_t n = tree.vertex_count();
  std::vector<const std::string*> min_label(n, nullptr);
  std::vector<std::size_t> size(n, 1);
  for (auto it = view.preorder.rbegin(); it != view.preorder.rend(); ++it) {
    const VertexId v = *it;
    if (tree.has_label(v)) min_label[v] = &tree.labels(v).front();
    for (VertexId c : view.children[v]) {
      size[v] += size[c];
      if (min_label[c] && (!min_label[v] || *min_label[c] < *min_label[v]))
        min_label[v] = min_label[c];
    }
  }
  for (auto& ch : view.children) {
    if (ch.size() < 2) continue;
    std::stable_sort(ch.begin(), ch.end(), [&](VertexId x, VertexId y) {
      if (min_label[x] && min_label[y]) {
        if (*min_label[x] != *min_label[y]) return *min_label[x] < *min_label[y];
      } else if (min_label[x] || min_label[y]) {
        return min_label[x] != nullptr;
      }
      return size[x] < size[y];
    });
  }
  rebuild_preorder(view);
  return view;
}

}  // namespace

RootedView canonical_view(const Tree& tree, VertexId top) {
  return sorted_view(tree, top);
}

RootedView canonical_view(const Tree& tree) {
  if (tree.vertex_count() == 0) return {};
  if (tree.rooted()) return sorted_view(tree, *tree.root());
  VertexId top = 0;
  const std::string* best = nullptr;
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (tree.has_label(v) && (!best || tree.labels(v).front() < *best)) {
      best = &tree.labels(v).front();
      top = v;
    }
  }
  return sorted_view(tree, top);
}

// ---------------------------------------------------------------------------

Split::Split(std::vector<std::string> one, std::vector<std::string> other)
    : side_a(std::move(one)), side_b(std::move(other)) {
  std::sort(side_a.begin(), side_a.end());
  std::sort(side_b.begin(), side_b.end());
  if (side_a.empty() || (!side_b.empty() && side_b.front() < side_a.front())) {
    std::swap(side_a, side_b);
  }
}

std::vector<LeafSet> subtree_leaf_sets(const Tree& tree, const RootedView& view,
                                       const LabelIndex& index) {
  const auto tips = tip_indices(tree, index);
  std::vector<LeafSet> sets(tree.vertex_count(), LeafSet(index.size()));
  for (auto it = view.preorder.rbegin(); it != view.preorder.rend(); ++it) {
    const VertexId v = *it;
    if (tips[v] != npos) sets[v].set(tips[v]);
    if (view.parent[v] != npos) sets[view.parent[v]] |= sets[v];
  }
  return sets;
}

namespace {

std::vector<std::string> names(const LeafSet& set, const LabelIndex& index) {
  std::vector<std::string> out;
  for (auto i : set.members()) out.push_back(index.label(i));
  return out;
}

}  // namespace

std::set<Cluster> clusters(const Tree& tree) {
  const RootedView view = hang_at_root(tree);
  const LabelIndex index = LabelIndex::of(tree);
  const auto sets = subtree_leaf_sets(tree, view, index);
  std::set<Cluster> out;
  for (VertexId v : view.preorder) {
    if (v == view.top) continue;
    const auto c = sets[v].count();
    if (c == 0 || c == index.size()) continue;
    out.insert(Cluster{names(sets[v], index)});
  }
  return out;
}

std::map<EdgeId, Split> splits(const Tree& tree) {
  std::map<EdgeId, Split> out;
  if (tree.vertex_count() == 0) return out;
  const LabelIndex index = LabelIndex::of(tree);
  const RootedView view = hang(tree, tree.root().value_or(0));
  const auto sets = subtree_leaf_sets(tree, view, index);
  for (VertexId v : view.preorder) {
    if (v == view.top) continue;
    const auto c = sets[v].count();
    if (c == 0 || c == index.size()) continue;
    out.emplace(view.parent_edge[v],
                Split(names(sets[v], index), names(sets[v].complement(), index)));
  }
  return out;
}

// ---------------------------------------------------------------------------

Tree contract(const Tree& tree, EdgeId e) {
  if (e >= tree.edge_count()) {
    fail(ErrorCode::EdgeNotFound, "edge " + std::to_string(e) + " not in tree");
  }
  const VertexId vi = tree.edge(e).parent;
  const VertexId vj = tree.edge(e).child;
  std::vector<VertexId> remap(tree.vertex_count(), npos);
  Tree out;
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (v == vi || v == vj) continue;
    remap[v] = out.add_vertex(tree.labels(v));
  }
  std::vector<std::string> merged = tree.labels(vi);
  merged.insert(merged.end(), tree.labels(vj).begin(), tree.labels(vj).end());
  const VertexId m = out.add_vertex(std::move(merged));
  remap[vi] = m;
  remap[vj] = m;
  for (EdgeId f = 0; f < tree.edge_count(); ++f) {
    if (f == e) continue;
    const auto& ed = tree.edge(f);
    out.add_edge(remap[ed.parent], remap[ed.child], ed.weight);
  }
  out.set_weighted(tree.weighted());
  if (tree.root()) out.set_root(remap[*tree.root()]);
  return out;
}

namespace {

// Copies the part of `view` spanned by active vertices, starting at view.top,
// folding every unlabelled vertex with exactly one active child into the edge
// below it.
Tree rebuild(const Tree& tree, const RootedView& view, VertexId top,
             const std::vector<char>& active, bool rooted) {
  Tree out;
  out.set_weighted(tree.weighted());
  auto single_active_child = [&](VertexId v) -> VertexId {
    VertexId found = npos;
    for (VertexId c : view.children[v]) {
      if (!active[c]) continue;
      if (found != npos) return npos;
      found = c;
    }
    return found;
  };
  const VertexId new_top = out.add_vertex(tree.labels(top));
  if (rooted) out.set_root(new_top);
  std::vector<std::pair<VertexId, VertexId>> stack{{top, new_top}};
  while (!stack.empty()) {
    auto [v, nv] = stack.back();
    stack.pop_back();
    const auto& ch = view.children[v];
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
      VertexId c = *it;
      if (!active[c]) continue;
      double w = tree.weight(view.parent_edge[c]);
      while (!tree.has_label(c)) {
        const VertexId next = single_active_child(c);
        if (next == npos) break;
        c = next;
        w += tree.weight(view.parent_edge[c]);
      }
      const VertexId nc = out.add_vertex(tree.labels(c));
      out.add_edge(nv, nc, w);
      stack.emplace_back(c, nc);
    }
  }
  return out;
}

// Walks down from the root past single-child unlabelled vertices.
VertexId effective_top(const Tree& tree, const RootedView& view,
                       const std::vector<char>& active) {
  VertexId top = view.top;
  for (;;) {
    if (tree.has_label(top)) return top;
    VertexId only = npos;
    std::size_t count = 0;
    for (VertexId c : view.children[top]) {
      if (active[c]) {
        only = c;
        ++count;
      }
    }
    if (count != 1) return top;
    top = only;
  }
}

}  // namespace

Tree suppress_unary(const Tree& tree, bool keep_root) {
  if (tree.vertex_count() <= 1) return tree;
  std::vector<char> active(tree.vertex_count(), 1);
  if (tree.rooted()) {
    const RootedView view = hang_at_root(tree);
    const VertexId top = effective_top(tree, view, active);
    if (keep_root) return rebuild(tree, view, top, active, true);
    // Unrooted reading of the subtree below `top`.
    std::fill(active.begin(), active.end(), 0);
    VertexId first_tip = npos;
    for (VertexId v : view.preorder) {
      VertexId u = v;
      while (u != npos && u != top) u = view.parent[u];
      if (u == top) active[v] = 1;
    }
    for (VertexId v : view.preorder) {
      if (active[v] && view.children[v].empty()) {
        first_tip = v;
        break;
      }
    }
    const RootedView from_tip = hang(tree, first_tip);
    return rebuild(tree, from_tip, first_tip, active, false);
  }
  VertexId first_tip = 0;
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (tree.degree(v) <= 1) {
      first_tip = v;
      break;
    }
  }
  const RootedView view = hang(tree, first_tip);
  return rebuild(tree, view, first_tip, active, false);
}

Tree restrict_to(const Tree& tree, std::span<const std::string> subset) {
  if (subset.empty()) fail(ErrorCode::DomainError, "restriction to an empty label set");
  std::unordered_map<std::string_view, VertexId> where;
  for (VertexId v = 0; v < tree.vertex_count(); ++v)
    if (tree.is_tip(v))
      for (const auto& l : tree.labels(v)) where.emplace(l, v);
  std::vector<char> selected(tree.vertex_count(), 0);
  VertexId any = npos;
  for (const auto& l : subset) {
    auto it = where.find(l);
    if (it == where.end()) fail(ErrorCode::UnknownLabel, "unknown label '" + l + "'");
    selected[it->second] = 1;
    any = it->second;
  }
  const VertexId top0 = tree.rooted() ? *tree.root() : any;
  const RootedView view = hang(tree, top0);
  std::vector<char> active(tree.vertex_count(), 0);
  for (auto it = view.preorder.rbegin(); it != view.preorder.rend(); ++it) {
    const VertexId v = *it;
    if (selected[v]) active[v] = 1;
    if (active[v] && view.parent[v] != npos) active[view.parent[v]] = 1;
  }
  if (!tree.rooted()) return rebuild(tree, view, top0, active, false);
  VertexId top = top0;
  for (;;) {
    if (selected[top]) break;
    VertexId only = npos;
    std::size_t count = 0;
    for (VertexId c : view.children[top]) {
      if (active[c]) {
        only = c;
        ++count;
      }
    }
    if (count != 1) break;
    top = only;
  }
  return rebuild(tree, view, top, active, true);
}

// ---------------------------------------------------------------------------

namespace {

bool same_shape(const Tree& a, const Tree& b, bool with_weights, double tol) {
  if (a.rooted() != b.rooted()) return false;
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count())
    return false;
  if (a.vertex_count() == 0) return true;
  const RootedView va = canonical_view(a);
  const RootedView vb = canonical_view(b);
  if (va.preorder.size() != vb.preorder.size()) return false;
  for (std::size_t k = 0; k < va.preorder.size(); ++k) {
    const VertexId x = va.preorder[k];
    const VertexId y = vb.preorder[k];
    if (va.children[x].size() != vb.children[y].size()) return false;
    if (a.labels(x) != b.labels(y)) return false;
    if (with_weights && x != va.top) {
      const double wx = a.weight(va.parent_edge[x]);
      const double wy = b.weight(vb.parent_edge[y]);
      if (!(std::abs(wx - wy) <= tol)) return false;
    }
  }
  return true;
}

void require_same_labels(const Tree& a, const Tree& b) {
  if (a.leaf_labels() != b.leaf_labels()) {
    fail(ErrorCode::LabelSetMismatch, "trees carry different leaf label sets");
  }
}

}  // namespace

bool is_identical(const Tree& a, const Tree& b) {
  require_same_labels(a, b);
  return same_shape(a, b, false, 0.0);
}

bool is_weight_identical(const Tree& a, const Tree& b, double tolerance) {
  require_same_labels(a, b);
  if (a.weighted() != b.weighted()) return false;
  return same_shape(a, b, a.weighted(), tolerance);
}

std::uint64_t count_binary_topologies(int n) {
  if (n < 2) fail(ErrorCode::DomainError, "count_binary_topologies needs n >= 2");
  std::uint64_t result = 1;
  for (std::uint64_t k = 3; k <= static_cast<std::uint64_t>(2 * n - 3); k += 2) {
    if (__builtin_mul_overflow(result, k, &result)) {
      fail(ErrorCode::DomainError, "(2n-3)!! overflows 64 bits for n = " + std::to_string(n));
    }
  }
  return result;
}

}  // namespace treedist
