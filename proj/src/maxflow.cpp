#include <algorithm>
#include <map>
#include <queue>
#include <vector>

#include "topofuse/cutset.hpp"

namespace topofuse {
namespace {

// Dinic on unit-capacity graphs; small instances only (vehicles on received paths).
class Dinic {
 public:
  explicit Dinic(int n) : adj_(n), level_(n), it_(n) {}

  void add_edge(int u, int v, int cap) {
    adj_[u].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({v, cap});
    adj_[v].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({u, 0});
  }

  int max_flow(int s, int t) {
    int flow = 0;
    while (bfs(s, t)) {
      std::fill(it_.begin(), it_.end(), 0);
      while (int pushed = dfs(s, t, 1)) flow += pushed;
    }
    return flow;
  }

 private:
  struct Edge {
    int to, cap;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int id : adj_[u]) {
        const Edge& e = edges_[id];
        if (e.cap > 0 && level_[e.to] < 0) {
          level_[e.to] = level_[u] + 1;
          q.push(e.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  int dfs(int u, int t, int f) {
    if (u == t) return f;
    for (int& i = it_[u]; i < static_cast<int>(adj_[u].size()); ++i) {
      int id = adj_[u][i];
      Edge& e = edges_[id];
      if (e.cap > 0 && level_[e.to] == level_[u] + 1) {
        int d = dfs(e.to, t, std::min(f, e.cap));
        if (d > 0) {
          e.cap -= d;
          edges_[id ^ 1].cap += d;
          return d;
        }
      }
    }
    return 0;
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> level_, it_;
};

}  // namespace

int max_disjoint_flow(const std::vector<std::vector<int>>& ordered_rows) {
  std::map<int, int> id;  // vertex label -> dense index
  for (const auto& row : ordered_rows)
    for (int v : row) id.emplace(v, static_cast<int>(id.size()));
  const int nv = static_cast<int>(id.size());

  // node split: vertex i becomes in-node i and out-node nv+i joined by a
  // capacity-1 arc; s = 2*nv, t = 2*nv+1
  const int s = 2 * nv, t = 2 * nv + 1;
  Dinic dinic(2 * nv + 2);
  for (int i = 0; i < nv; ++i) dinic.add_edge(i, nv + i, 1);

  std::vector<std::pair<int, int>> arcs;
  bool direct = false;
  for (const auto& row : ordered_rows) {
    if (row.empty()) {
      direct = true;  // relay-free row: uncuttable s-t edge
      continue;
    }
    arcs.emplace_back(s, id.at(row.front()));
    for (size_t j = 0; j + 1 < row.size(); ++j)
      arcs.emplace_back(nv + id.at(row[j]), id.at(row[j + 1]));
    arcs.emplace_back(nv + id.at(row.back()), t);
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  for (auto [u, v] : arcs) dinic.add_edge(u, v, 1);

  int flow = dinic.max_flow(s, t);
  if (direct) ++flow;
  return flow;
}

int min_cut_lower_bound(const BoolMatrix& sub) {
  std::vector<std::vector<int>> rows;
  rows.reserve(sub.rows());
  for (int r = 0; r < sub.rows(); ++r) rows.push_back(sub.row_support(r));
  return max_disjoint_flow(rows);
}

}  // namespace topofuse
