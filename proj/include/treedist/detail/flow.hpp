#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace treedist::detail {

// Dinic max flow over real capacities. Residual capacities below `eps` count
// as saturated.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t n, double eps = 1e-15) : adj_(n), level_(n), cursor_(n), eps_(eps) {}

  void add_edge(std::size_t from, std::size_t to, double capacity) {
    adj_[from].push_back(arcs_.size());
    arcs_.push_back({to, capacity});
    adj_[to].push_back(arcs_.size());
    arcs_.push_back({from, 0.0});
  }

  double run(std::size_t source, std::size_t sink) {
    double total = 0.0;
    while (bfs(source, sink)) {
      std::fill(cursor_.begin(), cursor_.end(), 0);
      for (;;) {
        const double pushed = dfs(source, sink, std::numeric_limits<double>::infinity());
        if (pushed <= eps_) break;
        total += pushed;
      }
    }
    return total;
  }

  // Vertices reachable from `source` in the residual graph (after run()).
  std::vector<char> reachable(std::size_t source) const {
    std::vector<char> seen(adj_.size(), 0);
    std::vector<std::size_t> stack{source};
    seen[source] = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t id : adj_[v]) {
        const Arc& a = arcs_[id];
        if (a.residual > eps_ && !seen[a.to]) {
          seen[a.to] = 1;
          stack.push_back(a.to);
        }
      }
    }
    return seen;
  }

 private:
  struct Arc {
    std::size_t to;
    double residual;
  };

  bool bfs(std::size_t source, std::size_t sink) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> q;
    level_[source] = 0;
    q.push(source);
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      for (std::size_t id : adj_[v]) {
        const Arc& a = arcs_[id];
        if (a.residual > eps_ && level_[a.to] < 0) {
          level_[a.to] = level_[v] + 1;
          q.push(a.to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  double dfs(std::size_t v, std::size_t sink, double limit) {
    if (v == sink) return limit;
    for (std::size_t& i = cursor_[v]; i < adj_[v].size(); ++i) {
      const std::size_t id = adj_[v][i];
      Arc& a = arcs_[id];
      if (a.residual <= eps_ || level_[a.to] != level_[v] + 1) continue;
      const double got = dfs(a.to, sink, std::min(limit, a.residual));
      if (got > eps_) {
        a.residual -= got;
        arcs_[id ^ 1].residual += got;
        return got;
      }
    }
    return 0.0;
  }

  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
  double eps_;
};

struct VertexCover {
  double weight = 0.0;
  std::vector<char> left;   // left[i]: left vertex i is in the cover
  std::vector<char> right;
};

// Minimum-weight vertex cover of a bipartite graph given by `conflict`
// (conflict[i][j]: edge between left i and right j).
inline VertexCover min_vertex_cover(const std::vector<double>& left_weight,
                                    const std::vector<double>& right_weight,
                                    const std::vector<std::vector<char>>& conflict) {
  const std::size_t nl = left_weight.size(), nr = right_weight.size();
  const std::size_t source = nl + nr, sink = source + 1;
  MaxFlow flow(nl + nr + 2);
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nl; ++i) flow.add_edge(source, i, left_weight[i]);
  for (std::size_t j = 0; j < nr; ++j) flow.add_edge(nl + j, sink, right_weight[j]);
  for (std::size_t i = 0; i < nl; ++i)
    for (std::size_t j = 0; j < nr; ++j)
      if (conflict[i][j]) flow.add_edge(i, nl + j, inf);
  VertexCover cover;
  cover.weight = flow.run(source, sink);
  const auto seen = flow.reachable(source);
  cover.left.resize(nl);
  cover.right.resize(nr);
  for (std::size_t i = 0; i < nl; ++i) cover.left[i] = !seen[i];
  for (std::size_t j = 0; j < nr; ++j) cover.right[j] = seen[nl + j];
  return cover;
}

}  // namespace treedist::detail
