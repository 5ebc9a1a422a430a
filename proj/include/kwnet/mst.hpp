#pragma once

#include <algorithm>
#include <numeric>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "kwnet/network.hpp"

namespace kwnet {

template <typename Scalar>
struct TreeEdge {
  int a = 0;  // a < b
  int b = 0;
  Scalar distance{};
};

template <typename Scalar>
struct TreeComponent {
  std::vector<int> nodes;  // ascending
  std::vector<TreeEdge<Scalar>> edges;
};

// Minimum spanning forest; one tree per connected component of the finite-distance
// graph. Components are ordered by their smallest node.
template <typename Scalar>
struct SpanningForest {
  int node_count = 0;
  std::vector<TreeComponent<Scalar>> components;
  std::vector<int> component_of;  // node -> index into components
};

// One agglomeration. Clusters 0..n-1 are the single nodes; the cluster created by
// step s gets id n + s. (node_p, node_q) is the pair realizing the merge distance.
template <typename Scalar>
struct MergeStep {
  int cluster_a = 0;
  int cluster_b = 0;
  Scalar distance{};
  int node_p = 0;
  int node_q = 0;
};

template <typename Scalar>
struct Dendrogram {
  std::vector<MergeStep<Scalar>> steps;
};

template <typename Scalar>
struct SingleLinkResult {
  SpanningForest<Scalar> forest;
  Dendrogram<Scalar> dendrogram;
};

namespace detail {

template <typename Scalar>
struct Link {
  bool present = false;
  Scalar distance{};
  int p = 0;  // p < q
  int q = 0;
};

// Strict order on candidate merges: smaller distance, then smaller (p, q).
template <typename Scalar>
bool better(const Link<Scalar>& x, const Link<Scalar>& y) {
  if (!x.present) return false;
  if (!y.present) return true;
  if (x.distance < y.distance) return true;
  if (y.distance < x.distance) return false;
  return std::tie(x.p, x.q) < std::tie(y.p, y.q);
}

}  // namespace detail

// Agglomerative single-link (nearest neighbour) clustering. At every step the two
// clusters at the smallest inter-cluster distance d(c_i, c_j) = min d(p, q) merge;
// equal distances are resolved by the smallest realizing (p, q). Absent distances are
// never merged, so clustering stops at one cluster per connected component. The
// realizing pairs are the minimum spanning forest edges.
template <typename Derived>
SingleLinkResult<typename Derived::Scalar> single_link_cluster(const Eigen::MatrixBase<Derived>& distances) {
  using Scalar = typename Derived::Scalar;
  using Link = detail::Link<Scalar>;
  using Traits = DistanceTraits<Scalar>;

  const int n = static_cast<int>(distances.rows());
  if (distances.cols() != distances.rows()) throw AnalysisError("distance matrix is not square");

  // links[i * n + j] holds the best link between active clusters occupying slots i and j.
  std::vector<Link> links(static_cast<std::size_t>(n) * n);
  auto at = [&](int i, int j) -> Link& { return links[static_cast<std::size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Scalar& d = distances(i, j);
      if (Traits::is_absent(d)) continue;
      Link l{true, d, i, j};
      at(i, j) = l;
      at(j, i) = l;
    }
  }

  std::vector<bool> active(n, true);
  std::vector<int> cluster_id(n);
  std::iota(cluster_id.begin(), cluster_id.end(), 0);
  std::vector<std::vector<int>> members(n);
  for (int i = 0; i < n; ++i) members[i] = {i};

  SingleLinkResult<Scalar> result;
  for (;;) {
    Link best;
    int bi = -1;
    int bj = -1;
    for (int i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (int j = i + 1; j < n; ++j) {
        if (!active[j]) continue;
        if (detail::better(at(i, j), best)) {
          best = at(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) break;

    MergeStep<Scalar> step;
    step.cluster_a = std::min(cluster_id[bi], cluster_id[bj]);
    step.cluster_b = std::max(cluster_id[bi], cluster_id[bj]);
    step.distance = best.distance;
    step.node_p = best.p;
    step.node_q = best.q;
    result.dendrogram.steps.push_back(step);

    // Slot bi absorbs bj: d(k, bi ∪ bj) = min(d(k, bi), d(k, bj)).
    for (int k = 0; k < n; ++k) {
      if (!active[k] || k == bi || k == bj) continue;
      if (detail::better(at(bj, k), at(bi, k))) {
        at(bi, k) = at(bj, k);
        at(k, bi) = at(bj, k);
      }
    }
    active[bj] = false;
    cluster_id[bi] = n + static_cast<int>(result.dendrogram.steps.size()) - 1;
    members[bi].insert(members[bi].end(), members[bj].begin(), members[bj].end());
    members[bj].clear();
  }

  auto& forest = result.forest;
  forest.node_count = n;
  forest.component_of.assign(n, -1);
  std::vector<int> slots;
  for (int i = 0; i < n; ++i) {
    if (active[i]) {
      std::sort(members[i].begin(), members[i].end());
      slots.push_back(i);
    }
  }
  std::sort(slots.begin(), slots.end(), [&](int x, int y) { return members[x].front() < members[y].front(); });
  for (int slot : slots) {
    const int c = static_cast<int>(forest.components.size());
    forest.components.push_back({members[slot], {}});
    for (int node : members[slot]) forest.component_of[node] = c;
  }
  for (const auto& step : result.dendrogram.steps) {
    auto& comp = forest.components[forest.component_of[step.node_p]];
    comp.edges.push_back({step.node_p, step.node_q, step.distance});
  }
  return result;
}

// Sum of tree edge distances in ascending order, so equal distance multisets give
// bit-identical totals.
template <typename Scalar>
Scalar total_distance(const SpanningForest<Scalar>& forest) {
  std::vector<Scalar> all;
  for (const auto& comp : forest.components)
    for (const auto& e : comp.edges) all.push_back(e.distance);
  std::sort(all.begin(), all.end());
  Scalar total(0);
  for (const auto& d : all) total += d;
  return total;
}

}  // namespace kwnet
