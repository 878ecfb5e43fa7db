// Copyright 2026 The collabkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "collabkit/errors.hpp"

namespace collabkit {

// Agglomerative merge history. Leaves are 0..n-1 in sorted-id order; the
// merge at step k creates cluster n + k. Merge distances follow the Ward
// criterion; monotonicity of the sequence is not assumed.
struct Linkage {
  struct Merge {
    int a = 0;
    int b = 0;               // a < b
    double distance = 0.0;
    int size = 0;            // size of the merged cluster
  };
  std::vector<std::string> ids;  // sorted; leaf i is ids[i]
  std::vector<Merge> merges;     // exactly n - 1 entries

  int n_leaves() const { return static_cast<int>(ids.size()); }
};

// Ward linkage over Euclidean distances. Inputs are reordered by id before
// clustering, so permuting (points, ids) jointly cannot change the result;
// distance ties break toward the smallest (a, b) cluster index pair.
inline Linkage ward_linkage(std::vector<std::vector<double>> points,
                            std::vector<std::string> ids) {
  const size_t n = points.size();
  require_input(n >= 2, "ward_linkage: need at least 2 points");
  require_input(ids.size() == n, "ward_linkage: ids and points differ in length");
  const size_t dim = points[0].size();
  for (const auto& p : points) {
    require_input(p.size() == dim, "ward_linkage: points differ in dimension");
    for (double v : p) {
      require_input(std::isfinite(v), "ward_linkage: non-finite coordinate");
    }
  }

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return ids[a] < ids[b]; });

  Linkage lk;
  lk.ids.reserve(n);
  std::vector<std::vector<double>> pts;
  pts.reserve(n);
  for (size_t i : order) {
    lk.ids.push_back(ids[i]);
    pts.push_back(std::move(points[i]));
  }
  for (size_t i = 1; i < n; ++i) {
    require_input(lk.ids[i] != lk.ids[i - 1], "ward_linkage: duplicate id '" + lk.ids[i] + "'");
  }

  // Active clusters carry their external label (leaf index or n + step),
  // member count, and squared distances to every other active cluster.
  struct Cluster {
    int label;
    int size;
  };
  std::vector<Cluster> active(n);
  for (size_t i = 0; i < n; ++i) active[i] = {static_cast<int>(i), 1};

  std::vector<std::vector<double>> d2(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (size_t k = 0; k < dim; ++k) {
        double diff = pts[i][k] - pts[j][k];
        s += diff * diff;
      }
      d2[i][j] = s;
      d2[j][i] = s;
    }
  }

  for (size_t step = 0; step + 1 < n; ++step) {
    size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    int best_a = 0, best_b = 0;
    for (size_t i = 0; i < active.size(); ++i) {
      for (size_t j = i + 1; j < active.size(); ++j) {
        double v = d2[i][j];
        int a = std::min(active[i].label, active[j].label);
        int b = std::max(active[i].label, active[j].label);
        if (v < best || (v == best && (a < best_a || (a == best_a && b < best_b)))) {
          best = v;
          bi = i;
          bj = j;
          best_a = a;
          best_b = b;
        }
      }
    }

    const int ni = active[bi].size;
    const int nj = active[bj].size;
    const double dij2 = d2[bi][bj];

    // Lance-Williams update for Ward:
    // d(k, i+j)^2 = ((n_i + n_k) d(k,i)^2 + (n_j + n_k) d(k,j)^2 - n_k d(i,j)^2)
    //               / (n_i + n_j + n_k)
    for (size_t k = 0; k < active.size(); ++k) {
      if (k == bi || k == bj) continue;
      const double nk = active[k].size;
      double v = ((ni + nk) * d2[bi][k] + (nj + nk) * d2[bj][k] - nk * dij2) /
                 (ni + nj + nk);
      d2[bi][k] = v;
      d2[k][bi] = v;
    }

    lk.merges.push_back({best_a, best_b, std::sqrt(dij2), ni + nj});
    active[bi] = {static_cast<int>(n + step), ni + nj};

    // Drop bj by swapping with the last active cluster.
    size_t last = active.size() - 1;
    if (bj != last) {
      active[bj] = active[last];
      for (size_t k = 0; k < active.size(); ++k) {
        d2[bj][k] = d2[last][k];
        d2[k][bj] = d2[k][last];
      }
      d2[bj][bj] = 0.0;
    }
    active.pop_back();
  }
  return lk;
}

// Binary merge tree over leaves; node indices follow the linkage convention
// (0..n-1 leaves, n + step for internal nodes).
struct Dendrogram {
  struct Node {
    int left = -1;
    int right = -1;
    int step = -1;  // creation step for internal nodes
  };
  std::vector<std::string> ids;
  std::vector<Node> nodes;  // indexed by node id; leaves have left == right == -1
  int root = -1;
  std::vector<std::string> leaves_in_order;
};

// Deterministic child placement: the earlier-created node goes left. Leaves
// precede every internal node, and internal creation order is the step
// order, so this is simply "smaller node index left".
inline Dendrogram build_dendrogram(const Linkage& lk) {
  Dendrogram dg;
  dg.ids = lk.ids;
  const int n = lk.n_leaves();
  dg.nodes.assign(static_cast<size_t>(n) + lk.merges.size(), {});
  for (size_t k = 0; k < lk.merges.size(); ++k) {
    const auto& m = lk.merges[k];
    Dendrogram::Node node;
    node.left = std::min(m.a, m.b);
    node.right = std::max(m.a, m.b);
    node.step = static_cast<int>(k);
    dg.nodes[n + k] = node;
  }
  dg.root = n + static_cast<int>(lk.merges.size()) - 1;

  std::vector<int> stack{dg.root};
  while (!stack.empty()) {
    int node = stack.back();
    stack.pop_back();
    if (node < n) {
      dg.leaves_in_order.push_back(lk.ids[node]);
      continue;
    }
    stack.push_back(dg.nodes[node].right);
    stack.push_back(dg.nodes[node].left);
  }
  check_invariant(dg.leaves_in_order.size() == static_cast<size_t>(n),
                  "dendrogram traversal missed leaves");
  return dg;
}

inline std::vector<std::string> leaf_order(const Linkage& lk) {
  return build_dendrogram(lk).leaves_in_order;
}

// Partition into k clusters by undoing the last k-1 merges. Clusters are
// sorted by their smallest member id.
inline std::vector<std::vector<std::string>> cut(const Linkage& lk, int k) {
  const int n = lk.n_leaves();
  require_input(k >= 1 && k <= n, "cut: k out of range");
  std::vector<int> parent(static_cast<size_t>(n) + lk.merges.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  const int steps = n - k;
  for (int s = 0; s < steps; ++s) {
    const auto& m = lk.merges[s];
    int node = n + s;
    parent[find(m.a)] = node;
    parent[find(m.b)] = node;
  }
  std::map<int, std::vector<std::string>> groups;
  for (int leaf = 0; leaf < n; ++leaf) {
    groups[find(leaf)].push_back(lk.ids[leaf]);
  }
  std::vector<std::vector<std::string>> out;
  for (auto& [_, members] : groups) {
    std::sort(members.begin(), members.end());
    out.push_back(std::move(members));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  check_invariant(static_cast<int>(out.size()) == k, "cut produced wrong cluster count");
  return out;
}

}  // namespace collabkit
