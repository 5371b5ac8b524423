// Copyright 2026 The screenkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

namespace screenkit {

// Dinic max-flow on integer capacities.
class MaxFlow {
 public:
  using Cap = std::int64_t;
  static constexpr Cap kInf = std::numeric_limits<Cap>::max() / 4;

  explicit MaxFlow(int nodes) : graph_(nodes), level_(nodes), cursor_(nodes) {}

  // Returns the edge id; flow_on(id) reads the pushed amount later.
  int add_edge(int from, int to, Cap cap) {
    graph_[from].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({to, cap, cap});
    graph_[to].push_back(static_cast<int>(edges_.size()));
    edges_.push_back({from, 0, 0});
    return static_cast<int>(edges_.size()) - 2;
  }

  Cap run(int source, int sink) {
    Cap total = 0;
    while (bfs(source, sink)) {
      std::fill(cursor_.begin(), cursor_.end(), 0);
      while (Cap pushed = dfs(source, sink, kInf)) total += pushed;
    }
    return total;
  }

  Cap flow_on(int id) const { return edges_[id].original - edges_[id].residual; }

 private:
  struct Edge {
    int to;
    Cap residual;
    Cap original;
  };

  bool bfs(int source, int sink) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<int> frontier;
    level_[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
      int v = frontier.front();
      frontier.pop();
      for (int id : graph_[v]) {
        const Edge& e = edges_[id];
        if (e.residual > 0 && level_[e.to] < 0) {
          level_[e.to] = level_[v] + 1;
          frontier.push(e.to);
        }
      }
    }
    return level_[sink] >= 0;
  }

  Cap dfs(int v, int sink, Cap limit) {
    if (v == sink) return limit;
    for (auto& i = cursor_[v]; i < static_cast<int>(graph_[v].size()); ++i) {
      int id = graph_[v][i];
      Edge& e = edges_[id];
      if (e.residual <= 0 || level_[e.to] != level_[v] + 1) continue;
      Cap got = dfs(e.to, sink, std::min(limit, e.residual));
      if (got > 0) {
        e.residual -= got;
        edges_[id ^ 1].residual += got;
        return got;
      }
    }
    return 0;
  }

  std::vector<std::vector<int>> graph_;
  std::vector<Edge> edges_;
  std::vector<int> level_;
  std::vector<int> cursor_;
};

}  // namespace screenkit
