#include "treedist/quartet_triplet.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "treedist/error.hpp"
#include "treedist/parallel.hpp"

namespace treedist {

namespace {

void require_shape(const Tree& a, const Tree& b, int k) {
  if (k != 3 && k != 4) fail(ErrorCode::SubsetSizeMismatch, "subset size must be 3 or 4");
  const bool want_rooted = k == 3;
  if (a.rooted() != want_rooted || b.rooted() != want_rooted) {
    fail(ErrorCode::RootednessMismatch,
         want_rooted ? "triplets need rooted trees" : "quartets need unrooted trees");
  }
}

// n x n table of leaf-to-leaf path lengths (edge counts when !weighted).
std::vector<double> leaf_paths(const Tree& t, const LabelIndex& index, bool weighted) {
  const std::size_t n = index.size();
  const auto tips = tip_indices(t, index);
  std::vector<double> out(n * n, 0.0);
  std::vector<double> dist(t.vertex_count());
  std::vector<VertexId> stack;
  std::vector<VertexId> from(t.vertex_count());
  for (VertexId s = 0; s < t.vertex_count(); ++s) {
    if (tips[s] == npos) continue;
    stack.assign(1, s);
    dist[s] = 0.0;
    from[s] = npos;
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      if (tips[v] != npos) out[tips[s] * n + tips[v]] = dist[v];
      for (EdgeId e : t.incident(v)) {
        const VertexId w = t.other_end(e, v);
        if (w == from[v]) continue;
        from[w] = v;
        dist[w] = dist[v] + (weighted ? t.weight(e) : 1.0);
        stack.push_back(w);
      }
    }
  }
  return out;
}

// n x n table of the depth of lca(i, j) for a rooted tree.
std::vector<std::uint32_t> lca_depths(const Tree& t, const LabelIndex& index) {
  const std::size_t n = index.size();
  const auto tips = tip_indices(t, index);
  const RootedView view = hang_at_root(t);
  std::vector<std::uint32_t> depth(t.vertex_count(), 0);
  for (VertexId v : view.preorder)
    if (view.parent[v] != npos) depth[v] = depth[view.parent[v]] + 1;
  std::vector<std::uint32_t> out(n * n, 0);
  std::vector<std::vector<std::size_t>> below(t.vertex_count());
  for (auto it = view.preorder.rbegin(); it != view.preorder.rend(); ++it) {
    const VertexId v = *it;
    auto& mine = below[v];
    if (tips[v] != npos) mine.push_back(tips[v]);
    for (VertexId c : view.children[v]) {
      auto& theirs = below[c];
      for (std::size_t x : mine)
        for (std::size_t y : theirs) {
          out[x * n + y] = depth[v];
          out[y * n + x] = depth[v];
        }
      mine.insert(mine.end(), theirs.begin(), theirs.end());
      std::vector<std::size_t>().swap(theirs);
    }
  }
  return out;
}

// Topology codes: 0, 1, 2 name the resolved pairing, 3 means unresolved.
// Quartet (a<b<c<d): 0 = ab|cd, 1 = ac|bd, 2 = ad|bc.
// Triplet (i<j<k): 0 = cherry ij, 1 = cherry ik, 2 = cherry jk.
constexpr int kUnresolved = 3;

inline int quartet_code(const double* d, std::size_t n, std::size_t a, std::size_t b,
                        std::size_t c, std::size_t e) {
  const double s0 = d[a * n + b] + d[c * n + e];
  const double s1 = d[a * n + c] + d[b * n + e];
  const double s2 = d[a * n + e] + d[b * n + c];
  if (s0 < s1 && s0 < s2) return 0;
  if (s1 < s0 && s1 < s2) return 1;
  if (s2 < s0 && s2 < s1) return 2;
  return kUnresolved;
}

inline int triplet_code(const std::uint32_t* l, std::size_t n, std::size_t i, std::size_t j,
                        std::size_t k) {
  const auto x = l[i * n + j], y = l[i * n + k], z = l[j * n + k];
  if (x > y && x > z) return 0;
  if (y > x && y > z) return 1;
  if (z > x && z > y) return 2;
  return kUnresolved;
}

inline void tally(int ca, int cb, std::uint64_t& agree, std::uint64_t& disagree,
                  std::uint64_t& only_a, std::uint64_t& only_b, std::uint64_t& unresolved) {
  if (ca != kUnresolved && cb != kUnresolved) {
    (ca == cb ? agree : disagree) += 1;
  } else if (ca != kUnresolved) {
    ++only_a;
  } else if (cb != kUnresolved) {
    ++only_b;
  } else {
    ++unresolved;
  }
}

CategoryTable categorize_impl(const Tree& a, const Tree& b, int k, bool parallel) {
  require_shape(a, b, k);
  const LabelIndex index = shared_labels(a, b);
  const std::size_t n = index.size();
  std::uint64_t agree = 0, disagree = 0, only_a = 0, only_b = 0, unresolved = 0;
  const auto sn = static_cast<std::int64_t>(n);
  if (k == 4) {
    const auto da = leaf_paths(a, index, false);
    const auto db = leaf_paths(b, index, false);
    const double* pa = da.data();
    const double* pb = db.data();
#pragma omp parallel for if (parallel) num_threads(worker_count()) schedule(dynamic) \
    reduction(+ : agree, disagree, only_a, only_b, unresolved)
    for (std::int64_t w = 0; w < sn; ++w) {
      const auto i = static_cast<std::size_t>(w);
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t l = j + 1; l < n; ++l)
          for (std::size_t m = l + 1; m < n; ++m)
            tally(quartet_code(pa, n, i, j, l, m), quartet_code(pb, n, i, j, l, m), agree,
                  disagree, only_a, only_b, unresolved);
    }
  } else {
    const auto la = lca_depths(a, index);
    const auto lb = lca_depths(b, index);
    const std::uint32_t* pa = la.data();
    const std::uint32_t* pb = lb.data();
#pragma omp parallel for if (parallel) num_threads(worker_count()) schedule(dynamic) \
    reduction(+ : agree, disagree, only_a, only_b, unresolved)
    for (std::int64_t w = 0; w < sn; ++w) {
      const auto i = static_cast<std::size_t>(w);
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t l = j + 1; l < n; ++l)
          tally(triplet_code(pa, n, i, j, l), triplet_code(pb, n, i, j, l), agree, disagree,
                only_a, only_b, unresolved);
    }
  }
  return CategoryTable{agree, disagree, only_a, only_b, unresolved};
}

// Path length between two labelled tips of a small tree.
double path_length(const Tree& t, std::string_view from, std::string_view to) {
  VertexId s = npos;
  for (VertexId v = 0; v < t.vertex_count(); ++v)
    if (t.has_label(v) && t.label(v) == from) s = v;
  std::vector<double> dist(t.vertex_count(), -1.0);
  std::vector<VertexId> stack{s};
  dist[s] = 0.0;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    if (t.has_label(v) && t.label(v) == to) return dist[v];
    for (EdgeId e : t.incident(v)) {
      const VertexId w = t.other_end(e, v);
      if (dist[w] >= 0.0) continue;
      dist[w] = dist[v] + t.weight(e);
      stack.push_back(w);
    }
  }
  return 0.0;
}

}  // namespace

SubsetTopology induced_topology(const Tree& tree, std::span<const std::string> subset) {
  const std::size_t want = tree.rooted() ? 3 : 4;
  const std::set<std::string> distinct(subset.begin(), subset.end());
  if (subset.size() != want || distinct.size() != want) {
    fail(ErrorCode::SubsetSizeMismatch, std::string(tree.rooted() ? "rooted" : "unrooted") +
                                            " trees need " + std::to_string(want) +
                                            " distinct labels");
  }
  const Tree r = restrict_to(tree, subset);
  SubsetTopology out;
  if (tree.rooted()) {
    const RootedView view = hang_at_root(r);
    for (VertexId c : view.children[view.top]) {
      if (view.is_leaf(c)) continue;
      std::vector<std::string> names;
      for (VertexId g : view.children[c]) names.push_back(r.label(g));
      std::sort(names.begin(), names.end());
      if (names.size() == 2) {
        out.kind = TopologyKind::Resolved;
        out.cherry = {names[0], names[1]};
      }
    }
    return out;
  }
  for (VertexId v = 0; v < r.vertex_count(); ++v)
    if (r.degree(v) >= 4) return out;
  // The partner of the smallest label shares its neighbour.
  const std::string& first = *distinct.begin();
  VertexId leaf = npos;
  for (VertexId v = 0; v < r.vertex_count(); ++v)
    if (r.is_tip(v) && r.label(v) == first) leaf = v;
  const VertexId hub = r.other_end(r.incident(leaf)[0], leaf);
  for (EdgeId e : r.incident(hub)) {
    const VertexId w = r.other_end(e, hub);
    if (w != leaf && r.is_tip(w)) {
      out.kind = TopologyKind::Resolved;
      out.cherry = {first, r.label(w)};
    }
  }
  return out;
}

CategoryTable categorize(const Tree& a, const Tree& b, int k) {
  return categorize_impl(a, b, k, true);
}

CategoryTable categorize_serial(const Tree& a, const Tree& b, int k) {
  return categorize_impl(a, b, k, false);
}

CategoryTable categorize_reference(const Tree& a, const Tree& b, int k) {
  require_shape(a, b, k);
  const LabelIndex index = shared_labels(a, b);
  const auto& names = index.labels();
  const std::size_t n = names.size();
  CategoryTable t;
  std::vector<std::string> subset(static_cast<std::size_t>(k));
  std::vector<std::size_t> pick(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < pick.size(); ++i) pick[i] = i;
  if (n < pick.size()) return t;
  for (;;) {
    for (std::size_t i = 0; i < pick.size(); ++i) subset[i] = names[pick[i]];
    const SubsetTopology ta = induced_topology(a, subset);
    const SubsetTopology tb = induced_topology(b, subset);
    const bool ra = ta.kind == TopologyKind::Resolved;
    const bool rb = tb.kind == TopologyKind::Resolved;
    if (ra && rb) {
      (ta == tb ? t.agree : t.disagree) += 1;
    } else if (ra) {
      ++t.only_a;
    } else if (rb) {
      ++t.only_b;
    } else {
      ++t.unresolved;
    }
    // Next combination in lexicographic order.
    std::size_t i = pick.size();
    while (i > 0 && pick[i - 1] == n - pick.size() + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < pick.size(); ++j) pick[j] = pick[j - 1] + 1;
  }
  return t;
}

std::uint64_t quartet_distance(const Tree& a, const Tree& b) {
  return categorize(a, b, 4).distance();
}

std::uint64_t triplet_distance(const Tree& a, const Tree& b) {
  return categorize(a, b, 3).distance();
}

double triplet_length_distance(const Tree& a, const Tree& b) {
  require_shape(a, b, 3);
  if (!a.weighted() || !b.weighted())
    fail(ErrorCode::UnweightedInput, "triplet length distance needs weighted trees");
  const LabelIndex index = shared_labels(a, b);
  const std::size_t n = index.size();
  const auto la = lca_depths(a, index);
  const auto lb = lca_depths(b, index);
  const auto da = leaf_paths(a, index, true);
  const auto db = leaf_paths(b, index, true);
  const auto sn = static_cast<std::int64_t>(n);
  double total = 0.0;
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic) reduction(+ : total)
  for (std::int64_t w = 0; w < sn; ++w) {
    const auto i = static_cast<std::size_t>(w);
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const int ca = triplet_code(la.data(), n, i, j, k);
        if (ca != triplet_code(lb.data(), n, i, j, k)) continue;
        // (x, y) is the cherry with x < y, z the outgroup.
        std::size_t x = i, y = j, z = k;
        if (ca == 1) {
          y = k;
          z = j;
        } else if (ca == 2) {
          x = j;
          y = k;
          z = i;
        }
        total += std::abs(da[x * n + y] - db[x * n + y]) + std::abs(da[x * n + z] - db[x * n + z]);
      }
    }
  }
  return total;
}

double triplet_length_reference(const Tree& a, const Tree& b) {
  require_shape(a, b, 3);
  if (!a.weighted() || !b.weighted())
    fail(ErrorCode::UnweightedInput, "triplet length distance needs weighted trees");
  const LabelIndex index = shared_labels(a, b);
  const auto& names = index.labels();
  const std::size_t n = names.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const std::vector<std::string> subset{names[i], names[j], names[k]};
        const SubsetTopology ta = induced_topology(a, subset);
        if (!(ta == induced_topology(b, subset))) continue;
        std::string x = names[i], y = names[j], z = names[k];
        if (ta.kind == TopologyKind::Resolved) {
          x = ta.cherry[0];
          y = ta.cherry[1];
          for (const auto& s : subset)
            if (s != x && s != y) z = s;
        }
        const Tree ra = restrict_to(a, subset);
        const Tree rb = restrict_to(b, subset);
        total += std::abs(path_length(ra, x, y) - path_length(rb, x, y)) +
                 std::abs(path_length(ra, x, z) - path_length(rb, x, z));
      }
    }
  }
  return total;
}

}  // namespace treedist
