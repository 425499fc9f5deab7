#include "treedist/compare.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <unordered_map>

#include "treedist/detail/assignment.hpp"
#include "treedist/error.hpp"

namespace treedist {

namespace {

void require_rooted(const Tree& t) {
  if (!t.rooted()) fail(ErrorCode::UnrootedInput, "tree must be rooted");
}

bool is_binary(const Tree& t) {
  const RootedView view = hang_at_root(t);
  for (VertexId v : view.preorder)
    if (!view.is_leaf(v) && view.children[v].size() != 2) return false;
  return true;
}

// Pearson product-moment correlation.
double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
    sx += x[i] * x[i];
    sy += y[i] * y[i];
  }
  mx /= m;
  my /= m;
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += (x[i] - mx) * (y[i] - my);
    vx += (x[i] - mx) * (x[i] - mx);
    vy += (y[i] - my) * (y[i] - my);
  }
  // Relative threshold: a constant vector leaves only rounding noise.
  if (x.empty() || vx <= 1e-24 * sx || vy <= 1e-24 * sy || vx == 0.0 || vy == 0.0)
    fail(ErrorCode::DegenerateVariance, "correlation undefined: constant values");
  return std::clamp(cov / std::sqrt(vx * vy), -1.0, 1.0);
}

std::vector<double> lower_triangle(const std::vector<std::vector<double>>& m) {
  std::vector<double> out;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) out.push_back(m[i][j]);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// MAST

MastResult mast_oracle(const Tree& a_in, const Tree& b_in) {
  require_rooted(a_in);
  require_rooted(b_in);
  const LabelIndex index = shared_labels(a_in, b_in);
  const std::size_t n = index.size();
  if (n > 12) fail(ErrorCode::TooLarge, "exhaustive agreement search handles n <= 12");
  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 1; m < (1u << n); ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(),
                   [](auto x, auto y) { return std::popcount(x) > std::popcount(y); });
  for (std::uint32_t m : masks) {
    std::vector<std::string> subset;
    for (std::size_t i = 0; i < n; ++i)
      if (m >> i & 1) subset.push_back(index.label(i));
    if (is_identical(restrict_to(a_in, subset), restrict_to(b_in, subset)))
      return {n - subset.size(), subset};
  }
  return {n, {}};
}

MastResult mast_distance(const Tree& a_in, const Tree& b_in) {
  require_rooted(a_in);
  require_rooted(b_in);
  const LabelIndex index = shared_labels(a_in, b_in);
  const Tree a = suppress_unary(a_in, true);
  const Tree b = suppress_unary(b_in, true);
  if (!is_binary(a) || !is_binary(b)) {
    if (index.size() > 12) fail(ErrorCode::TooLarge, "non-binary agreement search handles n <= 12");
    return mast_oracle(a_in, b_in);
  }
  const RootedView va = hang_at_root(a), vb = hang_at_root(b);
  const auto sa = subtree_leaf_sets(a, va, index), sb = subtree_leaf_sets(b, vb, index);
  const auto ta = tip_indices(a, index), tb = tip_indices(b, index);
  const std::size_t nb = b.vertex_count();

  // best[u * nb + v]: MAST size of the subtrees at u and v; how[] records
  // which recurrence case won, for the traceback.
  enum Case : unsigned char { LeafHit, Miss, Straight, Crossed, BLeft, BRight, ALeft, ARight };
  std::vector<std::size_t> best(a.vertex_count() * nb, 0);
  std::vector<unsigned char> how(best.size(), Miss);
  for (auto u_it = va.preorder.rbegin(); u_it != va.preorder.rend(); ++u_it) {
    const VertexId u = *u_it;
    for (auto v_it = vb.preorder.rbegin(); v_it != vb.preorder.rend(); ++v_it) {
      const VertexId v = *v_it;
      const std::size_t cell = u * nb + v;
      if (va.is_leaf(u)) {
        if (sb[v].test(ta[u])) {
          best[cell] = 1;
          how[cell] = LeafHit;
        }
        continue;
      }
      if (vb.is_leaf(v)) {
        if (sa[u].test(tb[v])) {
          best[cell] = 1;
          how[cell] = LeafHit;
        }
        continue;
      }
      const VertexId u1 = va.children[u][0], u2 = va.children[u][1];
      const VertexId v1 = vb.children[v][0], v2 = vb.children[v][1];
      const std::pair<std::size_t, Case> options[] = {
          {best[u1 * nb + v1] + best[u2 * nb + v2], Straight},
          {best[u1 * nb + v2] + best[u2 * nb + v1], Crossed},
          {best[u * nb + v1], BLeft},
          {best[u * nb + v2], BRight},
          {best[u1 * nb + v], ALeft},
          {best[u2 * nb + v], ARight},
      };
      for (const auto& [value, c] : options) {
        if (value > best[cell]) {
          best[cell] = value;
          how[cell] = c;
        }
      }
    }
  }

  std::vector<std::string> witness;
  std::vector<std::pair<VertexId, VertexId>> stack{{va.top, vb.top}};
  while (!stack.empty()) {
    const auto [u, v] = stack.back();
    stack.pop_back();
    const std::size_t cell = u * nb + v;
    if (best[cell] == 0) continue;
    switch (how[cell]) {
      case LeafHit:
        witness.push_back(index.label(va.is_leaf(u) ? ta[u] : tb[v]));
        break;
      case Straight:
        stack.push_back({va.children[u][0], vb.children[v][0]});
        stack.push_back({va.children[u][1], vb.children[v][1]});
        break;
      case Crossed:
        stack.push_back({va.children[u][0], vb.children[v][1]});
        stack.push_back({va.children[u][1], vb.children[v][0]});
        break;
      case BLeft:
        stack.push_back({u, vb.children[v][0]});
        break;
      case BRight:
        stack.push_back({u, vb.children[v][1]});
        break;
      case ALeft:
        stack.push_back({va.children[u][0], v});
        break;
      case ARight:
        stack.push_back({va.children[u][1], v});
        break;
      default:
        break;
    }
  }
  std::sort(witness.begin(), witness.end());
  return {index.size() - witness.size(), witness};
}

// ---------------------------------------------------------------------------
// Align

namespace {

double jaccard(const LeafSet& x, const LeafSet& y) {
  LeafSet both = x;
  both &= y;
  LeafSet either = x;
  either |= y;
  return static_cast<double>(both.count()) / static_cast<double>(either.count());
}

double score(const std::pair<LeafSet, LeafSet>& p, const std::pair<LeafSet, LeafSet>& q) {
  return std::max(std::min(jaccard(p.first, q.first), jaccard(p.second, q.second)),
                  std::min(jaccard(p.first, q.second), jaccard(p.second, q.first)));
}

std::pair<LeafSet, LeafSet> sides(const Split& s, const LabelIndex& index) {
  LeafSet x(index.size()), y(index.size());
  for (const auto& l : s.side_a) x.set(index.at(l));
  for (const auto& l : s.side_b) y.set(index.at(l));
  return {x, y};
}

std::vector<Split> edge_splits(const Tree& t) {
  std::vector<Split> out;
  for (const auto& [e, s] : splits(suppress_unary(t, false))) out.push_back(s);
  return out;
}

}  // namespace

double align_edge_score(const Split& x, const Split& y) {
  std::vector<std::string> all = x.side_a;
  all.insert(all.end(), x.side_b.begin(), x.side_b.end());
  std::sort(all.begin(), all.end());
  const LabelIndex index(all);
  return score(sides(x, index), sides(y, index));
}

AlignResult align_score(const Tree& a, const Tree& b) {
  const LabelIndex index = shared_labels(a, b);
  AlignResult r;
  r.edges_a = edge_splits(a);
  r.edges_b = edge_splits(b);
  std::vector<std::pair<LeafSet, LeafSet>> pa, pb;
  for (const auto& s : r.edges_a) pa.push_back(sides(s, index));
  for (const auto& s : r.edges_b) pb.push_back(sides(s, index));
  r.scores.assign(pa.size(), std::vector<double>(pb.size(), 0.0));
  for (std::size_t i = 0; i < pa.size(); ++i)
    for (std::size_t j = 0; j < pb.size(); ++j) r.scores[i][j] = score(pa[i], pb[j]);

  const std::size_t m = std::max(pa.size(), pb.size());
  std::vector<std::vector<double>> cost(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < pa.size(); ++i)
    for (std::size_t j = 0; j < pb.size(); ++j) cost[i][j] = -r.scores[i][j];
  const auto column = detail::min_cost_assignment(cost);
  r.matching.assign(pa.size(), npos);
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (column[i] < pb.size()) {
      r.matching[i] = column[i];
      r.total += r.scores[i][column[i]];
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Cophenetic correlation

CopheneticMatrix cophenetic_matrix(const Tree& tree, const ClassFn& class_fn) {
  require_rooted(tree);
  const Tree t = suppress_unary(tree, true);
  const RootedView view = hang_at_root(t);
  CopheneticMatrix out;
  out.labels = LabelIndex::of(t);
  const std::size_t n = out.labels.size();
  out.values.assign(n, std::vector<double>(n, 0.0));
  const auto tip = tip_indices(t, out.labels);

  std::vector<std::size_t> depth(t.vertex_count(), 0);
  std::size_t deepest = 0;
  for (VertexId v : view.preorder) {
    if (v != view.top) depth[v] = depth[view.parent[v]] + 1;
    if (!view.is_leaf(v)) deepest = std::max(deepest, depth[v]);
  }
  std::vector<double> value(deepest + 1);
  for (std::size_t d = 0; d <= deepest; ++d) {
    value[d] = class_fn(d);
    if (d > 0 && value[d] < value[d - 1])
      fail(ErrorCode::DomainError, "class values must not decrease with depth");
  }

  std::vector<std::vector<std::size_t>> below(t.vertex_count());
  for (auto it = view.preorder.rbegin(); it != view.preorder.rend(); ++it) {
    const VertexId v = *it;
    if (view.is_leaf(v)) {
      below[v] = {tip[v]};
      continue;
    }
    std::vector<std::size_t> acc;
    for (VertexId c : view.children[v]) {
      for (std::size_t i : acc)
        for (std::size_t j : below[c]) out.values[i][j] = out.values[j][i] = value[depth[v]];
      acc.insert(acc.end(), below[c].begin(), below[c].end());
      below[c].clear();
      below[c].shrink_to_fit();
    }
    below[v] = std::move(acc);
  }
  return out;
}

double ccc(const Tree& a, const Tree& b, const ClassFn& class_fn) {
  require_rooted(a);
  require_rooted(b);
  shared_labels(a, b);
  const auto ca = cophenetic_matrix(a, class_fn);
  const auto cb = cophenetic_matrix(b, class_fn);
  return pearson(lower_triangle(ca.values), lower_triangle(cb.values));
}

namespace {

std::string trim_cell(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

std::vector<std::string> cells(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim_cell(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) return out;
    start = comma + 1;
  }
}

void check_square_symmetric(const DistanceMatrix& m) {
  const std::size_t n = m.labels.size();
  if (m.values.size() != n) fail(ErrorCode::DomainError, "distance matrix is not square");
  for (const auto& row : m.values)
    if (row.size() != n) fail(ErrorCode::DomainError, "distance matrix is not square");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(m.values[i][j] - m.values[j][i]) > 1e-12 * (1.0 + std::abs(m.values[i][j])))
        fail(ErrorCode::DomainError, "distance matrix is not symmetric");
}

}  // namespace

DistanceMatrix read_distance_csv(std::istream& in) {
  DistanceMatrix m;
  std::string line;
  std::size_t line_no = 0;
  bool labelled_rows = false;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim_cell(line).empty()) continue;
    auto row = cells(line);
    if (header) {
      labelled_rows = row.front().empty();
      if (labelled_rows) row.erase(row.begin());
      m.labels = std::move(row);
      header = false;
      continue;
    }
    if (labelled_rows) {
      const std::size_t at = m.values.size();
      if (at >= m.labels.size() || row.front() != m.labels[at])
        fail(ErrorCode::SyntaxError, "line " + std::to_string(line_no) + ": row label does not follow the header order");
      row.erase(row.begin());
    }
    std::vector<double> values;
    for (const auto& c : row) {
      double x = 0.0;
      const auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), x);
      if (ec != std::errc() || p != c.data() + c.size() || !std::isfinite(x))
        fail(ErrorCode::SyntaxError, "line " + std::to_string(line_no) + ": bad number '" + c + "'");
      values.push_back(x);
    }
    m.values.push_back(std::move(values));
  }
  if (header) fail(ErrorCode::EmptyInput, "no header row");
  check_square_symmetric(m);
  return m;
}

double ccc_data(const Tree& tree, const DistanceMatrix& data, const ClassFn& class_fn) {
  check_square_symmetric(data);
  const auto cr = cophenetic_matrix(tree, class_fn);
  std::vector<std::string> sorted = data.labels;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != cr.labels.labels())
    fail(ErrorCode::LabelSetMismatch, "distance matrix labels differ from the tree's");
  std::vector<std::size_t> pos(data.labels.size());
  for (std::size_t i = 0; i < data.labels.size(); ++i) pos[i] = cr.labels.at(data.labels[i]);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      x.push_back(cr.values[pos[i]][pos[j]]);
      y.push_back(data.values[i][j]);
    }
  }
  return pearson(x, y);
}

// ---------------------------------------------------------------------------
// Node distance

namespace {

// Edge-count distances between every pair of tips, indexed by `index`.
std::vector<std::vector<std::size_t>> tip_distances(const Tree& t, const LabelIndex& index) {
  const std::size_t n = index.size();
  const auto tip = tip_indices(t, index);
  std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, 0));
  std::vector<std::size_t> dist(t.vertex_count());
  std::vector<VertexId> queue;
  for (VertexId s = 0; s < t.vertex_count(); ++s) {
    if (tip[s] == npos) continue;
    std::fill(dist.begin(), dist.end(), npos);
    dist[s] = 0;
    queue.assign(1, s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const VertexId v = queue[head];
      if (tip[v] != npos) d[tip[s]][tip[v]] = dist[v];
      for (EdgeId e : t.incident(v)) {
        const VertexId w = t.other_end(e, v);
        if (dist[w] == npos) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
      }
    }
  }
  return d;
}

}  // namespace

double node_distance(const Tree& a, const Tree& b, int k) {
  if (k != 1 && k != 2) fail(ErrorCode::DomainError, "k must be 1 or 2");
  const LabelIndex index = shared_labels(a, b);
  const std::size_t n = index.size();
  if (n < 2) fail(ErrorCode::DomainError, "node distance needs at least 2 labels");
  const auto da = tip_distances(suppress_unary(a, true), index);
  const auto db = tip_distances(suppress_unary(b, true), index);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double diff = std::abs(static_cast<double>(da[i][j]) - static_cast<double>(db[i][j]));
      sum += k == 1 ? diff : diff * diff;
    }
  }
  return 2.0 * sum / (static_cast<double>(n) * static_cast<double>(n - 1));
}

// ---------------------------------------------------------------------------
// Similarity based on probability

namespace {

// Clade -> summed weight of the edges above vertices with that clade, plus
// the total edge weight.
std::pair<std::unordered_map<LeafSet, double, LeafSetHash>, double> clade_weights(
    const Tree& t, const LabelIndex& index) {
  const RootedView view = hang_at_root(t);
  const auto sets = subtree_leaf_sets(t, view, index);
  std::unordered_map<LeafSet, double, LeafSetHash> out;
  double total = 0.0;
  for (VertexId v : view.preorder) {
    if (v == view.top) continue;
    const double w = t.weight(view.parent_edge[v]);
    out[sets[v]] += w;
    total += w;
  }
  return {std::move(out), total};
}

double overlap(const std::unordered_map<LeafSet, double, LeafSetHash>& x,
               const std::unordered_map<LeafSet, double, LeafSetHash>& y) {
  double s = 0.0;
  for (const auto& [clade, w] : x) {
    auto it = y.find(clade);
    if (it != y.end()) s += w * it->second;
  }
  return s;
}

}  // namespace

double similarity_probability_distance(const Tree& a, const Tree& b) {
  require_rooted(a);
  require_rooted(b);
  if (!a.weighted() || !b.weighted()) fail(ErrorCode::UnweightedInput, "d_Sim needs weighted trees");
  const LabelIndex index = shared_labels(a, b);
  const auto [wa, la] = clade_weights(a, index);
  const auto [wb, lb] = clade_weights(b, index);
  if (la <= 0.0 || lb <= 0.0) fail(ErrorCode::ZeroTotalLength, "total edge weight is zero");
  const double m_ab = overlap(wa, wb) / (la * lb);
  const double m_aa = overlap(wa, wa) / (la * la);
  const double m_bb = overlap(wb, wb) / (lb * lb);
  return 1.0 - (m_ab / m_aa + m_ab / m_bb) / 2.0;
}

}  // namespace treedist
