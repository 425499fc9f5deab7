#include "treedist/rf.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <optional>
#include <set>
#include <string_view>
#include <unordered_set>

#include "treedist/error.hpp"

namespace treedist {

namespace {

// Rank of every leaf in the DFS order of a reference tree; clusters of that
// tree are exactly the contiguous rank intervals.
struct Spans {
  std::vector<std::size_t> lo, hi, count;
};

// Vertex-indexed form over a hung view.
Spans spans(const RootedView& view, const std::vector<std::size_t>& rank_of_vertex) {
  const std::size_t n = view.parent.size();
  Spans s{std::vector<std::size_t>(n, npos), std::vector<std::size_t>(n, 0),
          std::vector<std::size_t>(n, 0)};
  for (auto it = view.preorder.rbegin(); it != view.preorder.rend(); ++it) {
    const VertexId v = *it;
    if (rank_of_vertex[v] != npos) {
      s.lo[v] = std::min(s.lo[v], rank_of_vertex[v]);
      s.hi[v] = std::max(s.hi[v], rank_of_vertex[v]);
      ++s.count[v];
    }
    const VertexId p = view.parent[v];
    if (p == npos || s.count[v] == 0) continue;
    s.lo[p] = std::min(s.lo[p], s.lo[v]);
    s.hi[p] = std::max(s.hi[p], s.hi[v]);
    s.count[p] += s.count[v];
  }
  return s;
}

std::uint64_t key(std::size_t lo, std::size_t hi) {
  return (static_cast<std::uint64_t>(lo) << 32) ^ static_cast<std::uint64_t>(hi);
}

// Per-tree setup shared by RF and consensus: the hung view and A-ranks.
struct Ranked {
  RootedView view;
  std::vector<std::size_t> rank_of_vertex;
};

// Unrooted trees hang from the tip holding leaf 0.
VertexId top_for(const Tree& t, const std::vector<std::size_t>& tips) {
  if (t.rooted()) return *t.root();
  for (VertexId v = 0; v < t.vertex_count(); ++v)
    if (tips[v] == 0) return v;
  return 0;
}

// The first tree fixes the ranks (DFS order of its leaves).
Ranked rank_reference(const Tree& t, const LabelIndex& index,
                      std::vector<std::size_t>& rank_of_leaf) {
  const auto tips = tip_indices(t, index);
  Ranked r{hang(t, top_for(t, tips)), std::vector<std::size_t>(t.vertex_count(), npos)};
  rank_of_leaf.assign(index.size(), npos);
  std::size_t next = 0;
  for (VertexId v : r.view.preorder) {
    if (tips[v] == npos) continue;
    rank_of_leaf[tips[v]] = next++;
    r.rank_of_vertex[v] = rank_of_leaf[tips[v]];
  }
  return r;
}

Ranked rank_other(const Tree& t, const LabelIndex& index,
                  const std::vector<std::size_t>& rank_of_leaf) {
  const auto tips = tip_indices(t, index);
  Ranked r{hang(t, top_for(t, tips)), std::vector<std::size_t>(t.vertex_count(), npos)};
  for (VertexId v = 0; v < t.vertex_count(); ++v)
    if (tips[v] != npos) r.rank_of_vertex[v] = rank_of_leaf[tips[v]];
  return r;
}

// A vertex contributes a cluster when it is not the top, does not repeat its
// only child's cluster, and its size lies in [min_size, max_size].
bool counts(const RootedView& view, const Spans& s, VertexId v, std::size_t min_size,
            std::size_t max_size) {
  return v != view.top && view.children[v].size() != 1 && s.count[v] >= min_size &&
         s.count[v] <= max_size;
}

std::set<Split> nontrivial_splits(const Tree& t) {
  std::set<Split> out;
  for (auto& [e, s] : splits(t))
    if (s.side_a.size() >= 2 && s.side_b.size() >= 2) out.insert(s);
  return out;
}

template <typename Set>
std::size_t symmetric_difference_size(const Set& a, const Set& b) {
  std::size_t shared = 0;
  for (const auto& x : a) shared += b.count(x);
  return a.size() + b.size() - 2 * shared;
}

// The linear RF path works on 32-bit preorder positions: its arrays stay
// small enough to remain cache resident well past 10^4 leaves.
using Pos = std::uint32_t;
constexpr Pos kNone = std::numeric_limits<Pos>::max();

// Compressed adjacency built by one sequential pass over the edge list, so
// traversal never touches the tree's per-vertex containers.
struct Csr {
  std::vector<Pos> offset;  // size vertex_count + 1
  std::vector<Pos> next;
  Pos degree(Pos v) const { return offset[v + 1] - offset[v]; }
};

Csr csr(const Tree& t) {
  const std::size_t n = t.vertex_count();
  Csr g{std::vector<Pos>(n + 1, 0), std::vector<Pos>(2 * t.edges().size())};
  const auto& edges = t.edges();
  constexpr std::size_t kAhead = 16;
  for (std::size_t j = 0; j < edges.size(); ++j) {
    if (j + kAhead < edges.size()) __builtin_prefetch(&g.offset[edges[j + kAhead].parent]);
    ++g.offset[edges[j].parent];
    ++g.offset[edges[j].child];
  }
  // Inclusive prefix sums are end offsets; filling backwards turns each
  // into the start offset.
  for (std::size_t v = 1; v < n; ++v) g.offset[v] += g.offset[v - 1];
  g.offset[n] = static_cast<Pos>(g.next.size());
  for (std::size_t j = 0; j < edges.size(); ++j) {
    if (j + kAhead < edges.size()) __builtin_prefetch(&g.offset[edges[j + kAhead].parent]);
    if (j + kAhead / 2 < edges.size()) {
      const Edge& f = edges[j + kAhead / 2];
      __builtin_prefetch(&g.next[g.offset[f.parent] - 1], 1);
      __builtin_prefetch(&g.next[g.offset[f.child] - 1], 1);
    }
    const Edge& e = edges[j];
    g.next[--g.offset[e.parent]] = static_cast<Pos>(e.child);
    g.next[--g.offset[e.child]] = static_cast<Pos>(e.parent);
  }
  return g;
}

// Breadth-first walk from `top`; entry i describes the i-th vertex reached,
// parent[i] < i and is non-decreasing in i, and the children of entry i sit
// at positions first_child[i] onwards. Each vertex's adjacency is prefetched
// a few queue positions ahead, which hides most of the latency of visiting
// vertices in an order unrelated to their ids.
struct Flat {
  std::vector<Pos> vertex;
  std::vector<Pos> parent;
  std::vector<Pos> degree;
  std::vector<Pos> first_child;
};

Flat flat_bfs(const Csr& g, Pos top) {
  const std::size_t n = g.offset.size() - 1;
  Flat f{std::vector<Pos>(n), std::vector<Pos>(n), std::vector<Pos>(n), std::vector<Pos>(n)};
  f.vertex[0] = top;
  f.parent[0] = kNone;
  std::size_t tail = 1;
  constexpr std::size_t kOffsetAhead = 16, kNextAhead = 8;
  for (std::size_t i = 0; i < tail; ++i) {
    if (i + kOffsetAhead < tail) __builtin_prefetch(&g.offset[f.vertex[i + kOffsetAhead]]);
    if (i + kNextAhead < tail) __builtin_prefetch(&g.next[g.offset[f.vertex[i + kNextAhead]]]);
    const Pos v = f.vertex[i];
    const Pos up = f.parent[i] == kNone ? kNone : f.vertex[f.parent[i]];
    f.degree[i] = g.degree(v);
    f.first_child[i] = static_cast<Pos>(tail);
    for (Pos k = g.offset[v]; k < g.offset[v + 1]; ++k) {
      const Pos w = g.next[k];
      if (w == up) continue;
      f.vertex[tail] = w;
      f.parent[tail++] = static_cast<Pos>(i);
    }
  }
  f.vertex.resize(tail);
  f.parent.resize(tail);
  f.degree.resize(tail);
  f.first_child.resize(tail);
  return f;
}

// Preorder leaf ranks for a breadth-first walk: subtree tip counts bottom up,
// then each child's first rank top down. Both passes are sequential. Every
// subtree's tips receive consecutive ranks.
std::vector<Pos> preorder_ranks(const Flat& f, const std::vector<char>& tip) {
  const std::size_t n = f.vertex.size();
  std::vector<Pos> count(n, 0), first(n, 0), rank(n, kNone);
  for (std::size_t i = n; i-- > 0;) {
    count[i] += tip[i];
    if (i > 0) count[f.parent[i]] += count[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    Pos next = first[i];
    if (tip[i]) rank[i] = next++;
    const std::size_t end = i + 1 < n ? f.first_child[i + 1] : n;
    for (std::size_t c = f.first_child[i]; c < end; ++c) {
      first[c] = next;
      next += count[c];
    }
  }
  return rank;
}

// Tip test on the compressed form; a lone root counts as a tip.
bool csr_tip(const Tree& t, const Csr& g, Pos v) {
  if (t.root() && *t.root() == v) return g.offset.size() == 2;
  return g.degree(v) <= 1;
}

// Leaf-rank interval and leaf count below every position.
struct FlatSpans {
  std::vector<Pos> lo, hi, count;
};

FlatSpans flat_spans(const std::vector<Pos>& parent, const std::vector<Pos>& rank) {
  const std::size_t n = parent.size();
  FlatSpans s{std::vector<Pos>(n, kNone), std::vector<Pos>(n, 0), std::vector<Pos>(n, 0)};
  for (std::size_t i = n; i-- > 0;) {
    if (rank[i] != kNone) {
      s.lo[i] = std::min(s.lo[i], rank[i]);
      s.hi[i] = std::max(s.hi[i], rank[i]);
      ++s.count[i];
    }
    const Pos p = parent[i];
    if (p == kNone || s.count[i] == 0) continue;
    s.lo[p] = std::min(s.lo[p], s.lo[i]);
    s.hi[p] = std::max(s.hi[p], s.hi[i]);
    s.count[p] += s.count[i];
  }
  return s;
}

// Open-addressing map from a's tip labels to a value (first a's vertex, then
// its rank). Labels of up to eight bytes live inside the slot and longer ones
// in a contiguous arena, so a probe for a short label touches one cache line.
// Labels are compared only on a 32-bit hash tag and length match.
class LabelTable {
 public:
  struct Slot {
    std::uint64_t data;  // inline bytes, or the arena offset of a long label
    std::uint32_t tag;
    Pos length;          // kNone marks an empty slot
    Pos value;
    std::uint32_t claimed;
  };

  explicit LabelTable(std::size_t tips)
      : slots_(std::max<std::size_t>(16, 2 * tips), Slot{0, 0, kNone, kNone, 0}) {}

  static std::size_t hash(std::string_view key) { return std::hash<std::string_view>{}(key); }
  // Callers working through many keys hash them first and prefetch the home
  // slot a few keys ahead.
  void prefetch(std::size_t h) const { __builtin_prefetch(&slots_[home(h)]); }

  bool insert(std::string_view key, std::size_t h, Pos value) {
    const auto tag = static_cast<std::uint32_t>(h);
    for (std::size_t i = home(h);; i = i + 1 == slots_.size() ? 0 : i + 1) {
      Slot& s = slots_[i];
      if (s.length == kNone) {
        s = Slot{0, tag, static_cast<Pos>(key.size()), value, 0};
        if (key.size() <= sizeof s.data) {
          std::memcpy(&s.data, key.data(), key.size());
        } else {
          s.data = arena_.size();
          arena_.append(key);
        }
        return true;
      }
      if (matches(s, tag, key)) return false;
    }
  }
  // Replaces every stored value v by f(v).
  template <typename F>
  void remap(F f) {
    for (Slot& s : slots_)
      if (s.length != kNone) s.value = f(s.value);
  }
  // The slot holding `key`, or nullptr.
  Slot* find(std::string_view key, std::size_t h) {
    const auto tag = static_cast<std::uint32_t>(h);
    for (std::size_t i = home(h);; i = i + 1 == slots_.size() ? 0 : i + 1) {
      Slot& s = slots_[i];
      if (s.length == kNone) return nullptr;
      if (matches(s, tag, key)) return &s;
    }
  }

 private:
  // Multiply-shift reduction of the hash onto the slot range.
  std::size_t home(std::size_t h) const {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(h) * slots_.size()) >> 64);
  }
  bool matches(const Slot& s, std::uint32_t tag, std::string_view key) const {
    if (s.tag != tag || s.length != key.size()) return false;
    const char* stored = key.size() <= sizeof s.data ? reinterpret_cast<const char*>(&s.data)
                                                     : arena_.data() + s.data;
    return std::memcmp(stored, key.data(), key.size()) == 0;
  }
  std::vector<Slot> slots_;
  std::string arena_;
};

std::string_view tip_label(const Tree& t, VertexId v) {
  if (!t.has_label(v)) fail(ErrorCode::DomainError, "tree has an unlabelled tip");
  return t.label(v);
}

struct TipKey {
  Pos vertex;
  std::string_view label;
  std::size_t hash;
};

// Tips in vertex order with their labels hashed.
std::vector<TipKey> tip_keys(const Tree& t, const Csr& g) {
  std::vector<TipKey> out;
  for (Pos v = 0; v < t.vertex_count(); ++v)
    if (csr_tip(t, g, v)) {
      const std::string_view label = tip_label(t, v);
      out.push_back({v, label, LabelTable::hash(label)});
    }
  return out;
}

constexpr std::size_t kProbeAhead = 8;

}  // namespace

RfDetail rf_detail(const Tree& a, const Tree& b) {
  if (a.rooted() != b.rooted())
    fail(ErrorCode::UnrootedInput, "RF needs both trees rooted or both unrooted");
  if (std::max(a.vertex_count(), b.vertex_count()) >= kNone)
    fail(ErrorCode::TooLarge, "RF supports fewer than 2^32 vertices");
  // Tree a is reduced to a label table and Day's cluster table before b is
  // read, which keeps the working set to one tree at a time. Labels are read
  // in vertex order; ranks are a preorder of a. Unrooted trees hang from
  // the tip of rank 0.
  std::optional<LabelTable> table;
  RfDetail d;
  Pos n = 0;
  std::vector<Pos> by_left, by_right;
  {
    const Csr ga = csr(a);
    const std::vector<TipKey> keys = tip_keys(a, ga);
    table.emplace(keys.size());
    Pos top_a = a.rooted() ? static_cast<Pos>(*a.root()) : kNone;
    for (std::size_t j = 0; j < keys.size(); ++j) {
      if (j + kProbeAhead < keys.size()) table->prefetch(keys[j + kProbeAhead].hash);
      const TipKey& k = keys[j];
      if (!table->insert(k.label, k.hash, k.vertex))
        fail(ErrorCode::DuplicateLabel, "duplicate label '" + std::string(k.label) + "'");
      if (top_a == kNone) top_a = k.vertex;
    }
    if (top_a == kNone) fail(ErrorCode::EmptyInput, "tree has no leaves");
    const Flat fa = flat_bfs(ga, top_a);
    std::vector<char> tip_a(fa.vertex.size());
    for (std::size_t i = 0; i < fa.vertex.size(); ++i)
      tip_a[i] = i == 0 ? csr_tip(a, ga, fa.vertex[0]) : fa.degree[i] <= 1;
    const std::vector<Pos> rank_a = preorder_ranks(fa, tip_a);
    std::vector<Pos> rank_of_vertex(a.vertex_count(), kNone);
    for (std::size_t i = 0; i < fa.vertex.size(); ++i) {
      if (!tip_a[i]) continue;
      rank_of_vertex[fa.vertex[i]] = rank_a[i];
      ++n;
    }
    table->remap([&](Pos v) { return rank_of_vertex[v]; });

    // Day's table: a cluster sharing its left end with its parent is the
    // only such cluster with its right end, so it is filed under that end;
    // every other cluster is the only one filed under its left end.
    const Pos min_size = a.rooted() ? 1 : 2;
    const Pos max_size = a.rooted() ? n - 1 : (n >= 2 ? n - 2 : 0);
    const FlatSpans sa = flat_spans(fa.parent, rank_a);
    by_left.assign(n, kNone);
    by_right.assign(n, kNone);
    for (std::size_t i = 1; i < fa.vertex.size(); ++i) {
      if (fa.degree[i] == 2 || sa.count[i] < min_size || sa.count[i] > max_size) continue;
      ++d.clusters_a;
      if (sa.lo[i] == sa.lo[fa.parent[i]]) {
        by_right[sa.hi[i]] = sa.lo[i];
      } else {
        by_left[sa.lo[i]] = sa.hi[i];
      }
    }
  }

  const Csr gb = csr(b);
  std::vector<Pos> rank_of_vertex(b.vertex_count(), kNone);
  std::size_t tips_b = 0, matched = 0;
  Pos top_b = b.rooted() ? static_cast<Pos>(*b.root()) : kNone;
  const std::vector<TipKey> keys = tip_keys(b, gb);
  tips_b = keys.size();
  for (std::size_t j = 0; j < keys.size(); ++j) {
    if (j + kProbeAhead < keys.size()) table->prefetch(keys[j + kProbeAhead].hash);
    const auto [v, label, h] = keys[j];
    LabelTable::Slot* slot = table->find(label, h);
    if (!slot) break;
    if (slot->claimed) fail(ErrorCode::DuplicateLabel, "duplicate label '" + std::string(label) + "'");
    slot->claimed = 1;
    const Pos r = slot->value;
    ++matched;
    rank_of_vertex[v] = r;
    if (!b.rooted() && r == 0) top_b = v;
  }
  if (tips_b != n || matched != n)
    fail(ErrorCode::LabelSetMismatch, "trees carry different leaf label sets");
  const Flat fb = flat_bfs(gb, top_b);
  std::vector<Pos> rank_b(fb.vertex.size());
  constexpr std::size_t kAhead = 16;
  for (std::size_t i = 0; i < fb.vertex.size(); ++i) {
    if (i + kAhead < fb.vertex.size()) __builtin_prefetch(&rank_of_vertex[fb.vertex[i + kAhead]]);
    rank_b[i] = rank_of_vertex[fb.vertex[i]];
  }
  const FlatSpans sb = flat_spans(fb.parent, rank_b);
  const Pos min_size = b.rooted() ? 1 : 2;
  const Pos max_size = b.rooted() ? n - 1 : (n >= 2 ? n - 2 : 0);
  for (std::size_t i = 1; i < fb.vertex.size(); ++i) {
    if (fb.degree[i] == 2 || sb.count[i] < min_size || sb.count[i] > max_size) continue;
    ++d.clusters_b;
    const Pos lo = sb.lo[i], hi = sb.hi[i];
    if (sb.count[i] == hi - lo + 1 && (by_left[lo] == hi || by_right[hi] == lo)) ++d.shared;
  }
  d.distance = d.clusters_a + d.clusters_b - 2 * d.shared;
  return d;
}

std::size_t rf_distance(const Tree& a, const Tree& b) { return rf_detail(a, b).distance; }

std::size_t rf_distance_oracle(const Tree& a, const Tree& b) {
  shared_labels(a, b);
  if (a.rooted() != b.rooted())
    fail(ErrorCode::UnrootedInput, "RF needs both trees rooted or both unrooted");
  if (a.rooted()) return symmetric_difference_size(clusters(a), clusters(b));
  return symmetric_difference_size(nontrivial_splits(a), nontrivial_splits(b));
}

Tree strict_consensus(std::span<const Tree> trees) {
  if (trees.empty()) fail(ErrorCode::EmptyInput, "strict consensus of no trees");
  for (const auto& t : trees)
    if (!t.rooted()) fail(ErrorCode::UnrootedInput, "strict consensus needs rooted trees");
  const Tree& a = trees.front();
  const LabelIndex index = LabelIndex::of(a);
  for (const auto& t : trees.subspan(1)) shared_labels(a, t);
  const std::size_t n = index.size();

  std::vector<std::size_t> rank_of_leaf;
  const Ranked ra = rank_reference(a, index, rank_of_leaf);
  const Spans sa = spans(ra.view, ra.rank_of_vertex);
  std::vector<char> keep(a.vertex_count(), 0);
  for (VertexId v : ra.view.preorder)
    keep[v] = v == ra.view.top || ra.view.is_leaf(v) || counts(ra.view, sa, v, 2, n - 1);

  for (const auto& t : trees.subspan(1)) {
    const Ranked rb = rank_other(t, index, rank_of_leaf);
    const Spans sb = spans(rb.view, rb.rank_of_vertex);
    std::unordered_set<std::uint64_t> present;
    for (VertexId v : rb.view.preorder)
      if (sb.count[v] >= 2 && sb.count[v] == sb.hi[v] - sb.lo[v] + 1)
        present.insert(key(sb.lo[v], sb.hi[v]));
    for (VertexId v : ra.view.preorder)
      if (keep[v] && v != ra.view.top && !ra.view.is_leaf(v) &&
          !present.count(key(sa.lo[v], sa.hi[v])))
        keep[v] = 0;
  }

  Tree out;
  std::vector<VertexId> image(a.vertex_count(), npos);
  for (VertexId v : ra.view.preorder) {
    const VertexId p = ra.view.parent[v];
    if (!keep[v]) {
      image[v] = image[p];
      continue;
    }
    image[v] = out.add_vertex(ra.view.is_leaf(v) ? a.labels(v) : std::vector<std::string>{});
    if (p == npos) {
      out.set_root(image[v]);
    } else {
      out.add_edge(image[p], image[v]);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::map<Split, std::vector<EdgeId>> edges_by_split(const Tree& t) {
  std::map<Split, std::vector<EdgeId>> out;
  for (auto& [e, s] : splits(t)) out[s].push_back(e);
  return out;
}

std::vector<double> distinct_values(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  for (double v : values)
    if (out.empty() || std::abs(v - out.back()) > 1e-12) out.push_back(v);
  return out;
}

}  // namespace

RflResult rfl_distance(const Tree& a_in, const Tree& b_in, bool raw) {
  if (!a_in.weighted() || !b_in.weighted())
    fail(ErrorCode::UnweightedInput, "RFL needs weighted trees");
  shared_labels(a_in, b_in);
  const Tree a = raw ? a_in : suppress_unary(a_in, false);
  const Tree b = raw ? b_in : suppress_unary(b_in, false);
  const auto ea = edges_by_split(a);
  const auto eb = edges_by_split(b);
  if (!raw) {
    for (const auto* m : {&ea, &eb})
      for (const auto& [s, list] : *m)
        if (list.size() > 1)
          fail(ErrorCode::DomainError, "suppressed tree repeats a split across edges");
  }

  RflResult r;
  for (const auto& [s, list] : eb)
    if (!ea.count(s))
      for (EdgeId e : list) r.unmatched_b += b.weight(e);

  constexpr std::size_t kMaxValues = 4096;
  std::size_t matchings = 1;
  std::vector<double> partial{0.0};
  double matched_sum = 0.0;
  for (const auto& [s, list] : ea) {
    auto it = eb.find(s);
    if (it == eb.end()) {
      for (EdgeId e : list) r.unmatched_a += a.weight(e);
      continue;
    }
    const auto& targets = it->second;
    for (EdgeId e : list) {
      if (matchings > std::numeric_limits<std::size_t>::max() / targets.size()) {
        matchings = std::numeric_limits<std::size_t>::max();
      } else {
        matchings *= targets.size();
      }
      std::vector<double> next;
      for (double base : partial)
        for (EdgeId f : targets) next.push_back(base + std::abs(a.weight(e) - b.weight(f)));
      partial = distinct_values(std::move(next));
      if (partial.size() > kMaxValues) partial.resize(kMaxValues);
      matched_sum += std::abs(a.weight(e) - b.weight(targets.front()));
      r.matched.push_back({s, a.weight(e), b.weight(targets.front())});
    }
  }
  if (matchings > 1) {
    for (double& v : partial) v += r.unmatched_a + r.unmatched_b;
    throw AmbiguousMatchingError(std::move(partial), matchings);
  }
  r.value = r.unmatched_a + r.unmatched_b + matched_sum;
  return r;
}

// ---------------------------------------------------------------------------

std::vector<AxiomViolation> check_metric_axioms(std::span<const Tree> sample,
                                                const DistanceFn& distance, double tolerance) {
  const std::size_t n = sample.size();
  if (n < 3) fail(ErrorCode::DomainError, "metric axiom check needs at least 3 trees");
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i][j] = distance(sample[i], sample[j]);

  std::vector<AxiomViolation> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (d[i][j] < -tolerance) out.push_back({"non-negativity", i, j, 0, d[i][j], 0.0});
      const bool zero = std::abs(d[i][j]) <= tolerance;
      if (zero != is_identical(sample[i], sample[j]))
        out.push_back({"identity", i, j, 0, d[i][j], 0.0});
      if (i < j && std::abs(d[i][j] - d[j][i]) > tolerance)
        out.push_back({"symmetry", i, j, 0, d[i][j], d[j][i]});
      for (std::size_t k = 0; k < n; ++k)
        if (d[i][k] > d[i][j] + d[j][k] + tolerance)
          out.push_back({"triangle", i, j, k, d[i][k], d[i][j] + d[j][k]});
    }
  }
  return out;
}

std::vector<AxiomViolation> rf_is_metric_suite(std::span<const Tree> sample) {
  return check_metric_axioms(sample, [](const Tree& a, const Tree& b) {
    return static_cast<double>(rf_distance(a, b));
  });
}

}  // namespace treedist
