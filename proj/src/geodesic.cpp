#include "treedist/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "treedist/detail/flow.hpp"
#include "treedist/error.hpp"

namespace treedist {

namespace {

constexpr double kTol = 1e-12;

bool disjoint(const std::vector<std::string>& x, const std::vector<std::string>& y) {
  auto i = x.begin();
  auto j = y.begin();
  while (i != x.end() && j != y.end()) {
    if (*i == *j) return false;
    if (*i < *j) {
      ++i;
    } else {
      ++j;
    }
  }
  return true;
}

std::vector<std::string> merged(const Split& s) {
  std::vector<std::string> out = s.side_a;
  out.insert(out.end(), s.side_b.begin(), s.side_b.end());
  std::sort(out.begin(), out.end());
  return out;
}

double edge_weight(const Tree& t, EdgeId e) { return t.weighted() ? t.weight(e) : 1.0; }

// Internal splits and pendant weights of a normalized tree.
void read_tree(const Tree& t, std::map<Split, double>& internal,
               std::map<std::string, double>& pendant) {
  const LabelIndex index = LabelIndex::of(t);
  const std::size_t n = index.size();
  if (t.rooted()) {
    const RootedView view = hang_at_root(t);
    const auto sets = subtree_leaf_sets(t, view, index);
    for (VertexId v : view.preorder) {
      if (v == view.top) continue;
      const double w = edge_weight(t, view.parent_edge[v]);
      const std::size_t c = sets[v].count();
      if (c == 1) {
        pendant[index.label(sets[v].first())] = w;
      } else if (c >= 2 && c < n) {
        std::vector<std::string> inside, outside{std::string(kRootLabel)};
        for (std::size_t i = 0; i < n; ++i) (sets[v].test(i) ? inside : outside).push_back(index.label(i));
        internal[Split(inside, outside)] += w;
      }
    }
    return;
  }
  for (const auto& [e, s] : splits(t)) {
    const double w = edge_weight(t, e);
    if (s.side_a.size() == 1 && s.side_b.size() == 1) {
      pendant[s.side_a[0]] = w;
      pendant[s.side_b[0]] = 0.0;
    } else if (s.side_a.size() == 1) {
      pendant[s.side_a[0]] = w;
    } else if (s.side_b.size() == 1) {
      pendant[s.side_b[0]] = w;
    } else {
      internal[s] += w;
    }
  }
}

// A unique split of one tree in the working representation: the side away
// from the reference element as a leaf set.
struct Item {
  Split split;
  LeafSet cluster;
  double weight;
};

LeafSet oriented(const Split& s, const LabelIndex& index, bool rooted) {
  const bool root_in_a = std::find(s.side_a.begin(), s.side_a.end(), kRootLabel) != s.side_a.end();
  const auto& side = rooted ? (root_in_a ? s.side_b : s.side_a) : s.side_b;
  LeafSet out(index.size());
  for (const auto& l : side) out.set(index.at(l));
  return out;
}

bool compatible_sets(const LeafSet& x, const LeafSet& y) {
  return !x.intersects(y) || x.subset_of(y) || y.subset_of(x);
}

std::vector<Item> items(const SplitSet& s, const LabelIndex& index, bool rooted) {
  std::vector<Item> out;
  for (const auto& [split, w] : s.entries) out.push_back({split, oriented(split, index, rooted), w});
  return out;
}

double squared_norm(const std::vector<Item>& all, const std::vector<std::size_t>& pick) {
  double s = 0.0;
  for (std::size_t i : pick) s += all[i].weight * all[i].weight;
  return s;
}

struct Block {
  std::vector<std::size_t> a, b;
  double na = 0.0, nb = 0.0;  // norms
};

void set_norms(Block& blk, const std::vector<Item>& ia, const std::vector<Item>& ib) {
  blk.na = std::sqrt(squared_norm(ia, blk.a));
  blk.nb = std::sqrt(squared_norm(ib, blk.b));
}

// Merges adjacent blocks until ||A_i|| / ||B_i|| strictly increases; ties merge.
std::vector<Block> make_proper(std::vector<Block> blocks, const std::vector<Item>& ia,
                               const std::vector<Item>& ib) {
  std::vector<Block> out;
  for (auto& blk : blocks) {
    out.push_back(std::move(blk));
    while (out.size() >= 2) {
      const Block& x = out[out.size() - 2];
      const Block& y = out.back();
      // ratio(x) >= ratio(y)  <=>  x.na * y.nb >= y.na * x.nb
      if (x.na * y.nb + kTol < y.na * x.nb) break;
      Block m = x;
      m.a.insert(m.a.end(), y.a.begin(), y.a.end());
      m.b.insert(m.b.end(), y.b.begin(), y.b.end());
      set_norms(m, ia, ib);
      out.pop_back();
      out.back() = std::move(m);
    }
  }
  return out;
}

double blocks_squared(const std::vector<Block>& blocks) {
  double s = 0.0;
  for (const auto& blk : blocks) s += (blk.na + blk.nb) * (blk.na + blk.nb);
  return s;
}

struct Prepared {
  Decomposition dec;
  LabelIndex index;
  std::vector<Item> ia, ib;
  std::vector<std::vector<char>> compat;  // compat[i][j]: ia[i] vs ib[j]
  double common_squared = 0.0;
  double pendant_squared = 0.0;
};

Prepared prepare(const Tree& a, const Tree& b, const GeodesicOptions& options) {
  Prepared p;
  p.dec = decompose(a, b);
  p.index = LabelIndex::of(a);
  p.ia = items(p.dec.a_unique, p.index, p.dec.rooted);
  p.ib = items(p.dec.b_unique, p.index, p.dec.rooted);
  p.compat.assign(p.ia.size(), std::vector<char>(p.ib.size(), 0));
  for (std::size_t i = 0; i < p.ia.size(); ++i)
    for (std::size_t j = 0; j < p.ib.size(); ++j)
      p.compat[i][j] = compatible_sets(p.ia[i].cluster, p.ib[j].cluster);
  for (const auto& c : p.dec.common)
    p.common_squared += (c.weight_a - c.weight_b) * (c.weight_a - c.weight_b);
  if (options.include_pendants)
    for (const auto& l : p.dec.pendants)
      p.pendant_squared += (l.weight_a - l.weight_b) * (l.weight_a - l.weight_b);
  return p;
}

}  // namespace

bool compatible(const Split& s1, const Split& s2) {
  if (merged(s1) != merged(s2))
    fail(ErrorCode::LabelSetMismatch, "splits cover different label sets");
  return disjoint(s1.side_a, s2.side_a) || disjoint(s1.side_a, s2.side_b) ||
         disjoint(s1.side_b, s2.side_a) || disjoint(s1.side_b, s2.side_b);
}

double SplitSet::norm() const {
  double s = 0.0;
  for (const auto& [split, w] : entries) s += w * w;
  return std::sqrt(s);
}

double cone_path_length(const SplitSet& a, const SplitSet& b) { return a.norm() + b.norm(); }

Decomposition decompose(const Tree& a_in, const Tree& b_in) {
  shared_labels(a_in, b_in);
  if (a_in.rooted() != b_in.rooted())
    fail(ErrorCode::RootednessMismatch, "geodesic needs both trees rooted or both unrooted");
  const Tree a = suppress_unary(a_in, true);
  const Tree b = suppress_unary(b_in, true);
  std::map<Split, double> ia, ib;
  std::map<std::string, double> pa, pb;
  read_tree(a, ia, pa);
  read_tree(b, ib, pb);
  Decomposition d;
  d.rooted = a.rooted();
  for (const auto& [s, w] : ia) {
    auto it = ib.find(s);
    if (it != ib.end()) {
      d.common.push_back({s, w, it->second});
    } else if (w > 0.0) {
      d.a_unique.entries.emplace(s, w);
    }
  }
  for (const auto& [s, w] : ib)
    if (!ia.count(s) && w > 0.0) d.b_unique.entries.emplace(s, w);
  for (const auto& [l, w] : pa) {
    d.pendants.push_back({l, w, pb[l]});
    d.a_unique.leaf_weights[l] = w;
    d.b_unique.leaf_weights[l] = pb[l];
  }
  return d;
}

GeodesicResult geodesic_distance(const Tree& a, const Tree& b, const GeodesicOptions& options) {
  Prepared p = prepare(a, b, options);
  GeodesicResult r;
  r.options = options;
  r.common_squared = p.common_squared;
  r.pendant_squared = p.pendant_squared;

  std::vector<char> a_free(p.ia.size(), 1), b_free(p.ib.size(), 1);
  for (std::size_t i = 0; i < p.ia.size(); ++i)
    for (std::size_t j = 0; j < p.ib.size(); ++j)
      if (!p.compat[i][j]) a_free[i] = b_free[j] = 0;
  Block all;
  for (std::size_t i = 0; i < p.ia.size(); ++i) {
    if (a_free[i]) {
      r.a_free.push_back(p.ia[i].split);
      r.free_squared += p.ia[i].weight * p.ia[i].weight;
    } else {
      all.a.push_back(i);
    }
  }
  for (std::size_t j = 0; j < p.ib.size(); ++j) {
    if (b_free[j]) {
      r.b_free.push_back(p.ib[j].split);
      r.free_squared += p.ib[j].weight * p.ib[j].weight;
    } else {
      all.b.push_back(j);
    }
  }

  std::vector<Block> blocks;
  if (!all.a.empty()) {
    set_norms(all, p.ia, p.ib);
    blocks.push_back(std::move(all));
  }
  const std::size_t limit = p.ia.size() + p.ib.size();
  for (std::size_t i = 0; i < blocks.size();) {
    const Block& blk = blocks[i];
    std::vector<double> lw, rw;
    for (std::size_t x : blk.a) lw.push_back(p.ia[x].weight * p.ia[x].weight / (blk.na * blk.na));
    for (std::size_t y : blk.b) rw.push_back(p.ib[y].weight * p.ib[y].weight / (blk.nb * blk.nb));
    std::vector<std::vector<char>> conflict(blk.a.size(), std::vector<char>(blk.b.size()));
    for (std::size_t x = 0; x < blk.a.size(); ++x)
      for (std::size_t y = 0; y < blk.b.size(); ++y)
        conflict[x][y] = !p.compat[blk.a[x]][blk.b[y]];
    const detail::VertexCover cover = detail::min_vertex_cover(lw, rw, conflict);
    if (cover.weight >= 1.0 - kTol) {
      ++i;
      continue;
    }
    // First block: covered A splits with uncovered B splits.
    Block first, second;
    for (std::size_t x = 0; x < blk.a.size(); ++x)
      (cover.left[x] ? first.a : second.a).push_back(blk.a[x]);
    for (std::size_t y = 0; y < blk.b.size(); ++y)
      (cover.right[y] ? second.b : first.b).push_back(blk.b[y]);
    if (first.a.empty() || first.b.empty() || second.a.empty() || second.b.empty()) {
      ++i;
      continue;
    }
    set_norms(first, p.ia, p.ib);
    set_norms(second, p.ia, p.ib);
    blocks[i] = std::move(first);
    blocks.insert(blocks.begin() + static_cast<std::ptrdiff_t>(i) + 1, std::move(second));
    if (++r.iterations > limit)
      fail(ErrorCode::NonConvergence, "support refinement did not terminate");
  }
  blocks = make_proper(std::move(blocks), p.ia, p.ib);

  for (const auto& blk : blocks) {
    SupportBlock sb;
    for (std::size_t x : blk.a) sb.a.push_back(p.ia[x].split);
    for (std::size_t y : blk.b) sb.b.push_back(p.ib[y].split);
    sb.norm_a = blk.na;
    sb.norm_b = blk.nb;
    r.support.push_back(std::move(sb));
  }
  r.length = std::sqrt(blocks_squared(blocks) + r.free_squared + r.common_squared +
                       r.pendant_squared);
  r.decomposition = std::move(p.dec);
  return r;
}

namespace {

// Calls f(labels) for every surjective labelling of m elements onto k blocks.
void for_each_ordered_partition(std::size_t m, std::size_t k,
                                const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> lab(m, 0);
  for (;;) {
    std::vector<char> used(k, 0);
    std::size_t distinct = 0;
    for (auto l : lab)
      if (!used[l]) {
        used[l] = 1;
        ++distinct;
      }
    if (distinct == k) f(lab);
    std::size_t i = 0;
    while (i < m && ++lab[i] == k) lab[i++] = 0;
    if (i == m) return;
  }
}

}  // namespace

double geodesic_oracle(const Tree& a, const Tree& b, const GeodesicOptions& options) {
  const Prepared p = prepare(a, b, options);
  const std::size_t na = p.ia.size(), nb = p.ib.size();
  if (na > 5 || nb > 5)
    fail(ErrorCode::TooLarge, "geodesic oracle handles at most 5 unique splits per side");

  std::vector<char> a_free(na, 1), b_free(nb, 1);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      if (!p.compat[i][j]) a_free[i] = b_free[j] = 0;

  double best = std::numeric_limits<double>::infinity();
  // X: A-only last block; Y: B-only first block.
  for (std::size_t xm = 0; xm < (std::size_t{1} << na); ++xm) {
    bool ok = true;
    for (std::size_t i = 0; i < na; ++i)
      if ((xm >> i & 1) && !a_free[i]) ok = false;
    if (!ok) continue;
    for (std::size_t ym = 0; ym < (std::size_t{1} << nb); ++ym) {
      ok = true;
      for (std::size_t j = 0; j < nb; ++j)
        if ((ym >> j & 1) && !b_free[j]) ok = false;
      if (!ok) continue;
      std::vector<std::size_t> ra, rb;
      double outer = 0.0;
      for (std::size_t i = 0; i < na; ++i) {
        if (xm >> i & 1) {
          outer += p.ia[i].weight * p.ia[i].weight;
        } else {
          ra.push_back(i);
        }
      }
      for (std::size_t j = 0; j < nb; ++j) {
        if (ym >> j & 1) {
          outer += p.ib[j].weight * p.ib[j].weight;
        } else {
          rb.push_back(j);
        }
      }
      if (ra.empty() != rb.empty()) continue;
      if (ra.empty()) {
        best = std::min(best, outer);
        continue;
      }
      for (std::size_t k = 1; k <= std::min(ra.size(), rb.size()); ++k) {
        for_each_ordered_partition(ra.size(), k, [&](const std::vector<std::size_t>& la) {
          for_each_ordered_partition(rb.size(), k, [&](const std::vector<std::size_t>& lb) {
            // P1: A in a later block than B must be compatible.
            for (std::size_t x = 0; x < ra.size(); ++x)
              for (std::size_t y = 0; y < rb.size(); ++y)
                if (la[x] > lb[y] && !p.compat[ra[x]][rb[y]]) return;
            std::vector<Block> blocks(k);
            for (std::size_t x = 0; x < ra.size(); ++x) blocks[la[x]].a.push_back(ra[x]);
            for (std::size_t y = 0; y < rb.size(); ++y) blocks[lb[y]].b.push_back(rb[y]);
            for (auto& blk : blocks) set_norms(blk, p.ia, p.ib);
            best = std::min(best, outer + blocks_squared(make_proper(std::move(blocks), p.ia, p.ib)));
          });
        });
      }
    }
  }
  return std::sqrt(best + p.common_squared + p.pendant_squared);
}

Tree interior_point(const GeodesicResult& r, double t) {
  if (!(t >= 0.0 && t <= 1.0)) fail(ErrorCode::DomainError, "t must lie in [0, 1]");
  const Decomposition& d = r.decomposition;
  SplitSet out;
  auto put = [&](const Split& s, double w) {
    if (w > 1e-15) out.entries[s] = w;
  };
  for (const auto& c : d.common) put(c.split, (1.0 - t) * c.weight_a + t * c.weight_b);
  for (const auto& l : d.pendants)
    out.leaf_weights[l.label] = (1.0 - t) * l.weight_a + t * l.weight_b;
  for (const auto& s : r.a_free) put(s, (1.0 - t) * d.a_unique.entries.at(s));
  for (const auto& s : r.b_free) put(s, t * d.b_unique.entries.at(s));
  for (const auto& blk : r.support) {
    const double along = (1.0 - t) * blk.norm_a - t * blk.norm_b;
    if (along > 0.0) {
      for (const auto& s : blk.a) put(s, d.a_unique.entries.at(s) * along / blk.norm_a);
    } else {
      for (const auto& s : blk.b) put(s, d.b_unique.entries.at(s) * -along / blk.norm_b);
    }
  }
  return tree_from_splits(out, d.rooted);
}

Tree tree_from_splits(const SplitSet& s, bool rooted) {
  std::set<std::string> names;
  for (const auto& [l, w] : s.leaf_weights) names.insert(l);
  for (const auto& [split, w] : s.entries) {
    for (const auto& side : {split.side_a, split.side_b})
      for (const auto& l : side)
        if (l != kRootLabel) names.insert(l);
  }
  const LabelIndex index(std::vector<std::string>(names.begin(), names.end()));
  const std::size_t n = index.size();

  std::vector<std::pair<LeafSet, double>> cl;
  for (const auto& [split, w] : s.entries) cl.emplace_back(oriented(split, index, rooted), w);
  std::stable_sort(cl.begin(), cl.end(),
                   [](const auto& x, const auto& y) { return x.first.count() > y.first.count(); });
  for (std::size_t i = 0; i < cl.size(); ++i)
    for (std::size_t j = i + 1; j < cl.size(); ++j)
      if (!compatible_sets(cl[i].first, cl[j].first))
        fail(ErrorCode::DomainError, "split set is not pairwise compatible");

  Tree t;
  t.set_weighted(true);
  const VertexId top = t.add_vertex();
  if (rooted) t.set_root(top);
  std::vector<VertexId> vertex(cl.size());
  for (std::size_t i = 0; i < cl.size(); ++i) {
    VertexId parent = top;
    for (std::size_t j = i; j-- > 0;) {
      if (cl[i].first.subset_of(cl[j].first)) {
        parent = vertex[j];
        break;
      }
    }
    vertex[i] = t.add_vertex();
    t.add_edge(parent, vertex[i], cl[i].second);
  }
  for (std::size_t leaf = 0; leaf < n; ++leaf) {
    VertexId parent = top;
    for (std::size_t j = cl.size(); j-- > 0;) {
      if (cl[j].first.test(leaf)) {
        parent = vertex[j];
        break;
      }
    }
    auto it = s.leaf_weights.find(index.label(leaf));
    t.add_edge(parent, t.add_vertex(index.label(leaf)), it == s.leaf_weights.end() ? 0.0 : it->second);
  }
  return t;
}

}  // namespace treedist
