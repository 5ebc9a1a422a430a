#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kwnet/mst.hpp"
#include "kwnet/ratio.hpp"

namespace kwnet {

// Unweighted tree on nodes 0..node_count-1.
struct TreeShape {
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;
};

// Relabels a forest component onto 0..m-1 in ascending node order.
template <typename Scalar>
TreeShape tree_shape(const TreeComponent<Scalar>& component) {
  TreeShape shape;
  shape.node_count = static_cast<int>(component.nodes.size());
  auto local = [&](int node) {
    return static_cast<int>(std::lower_bound(component.nodes.begin(), component.nodes.end(), node) -
                            component.nodes.begin());
  };
  for (const auto& e : component.edges) shape.edges.emplace_back(local(e.a), local(e.b));
  return shape;
}

// Longest hop-count shortest path. Throws AnalysisError if `tree` is not a tree.
int diameter(const TreeShape& tree);

struct LeafBranchCount {
  int leaves = 0;    // degree one
  int branches = 0;  // degree above one
  bool degenerate = false;  // single node: both counts are 0
};

LeafBranchCount leaves_branches(const TreeShape& tree);

// Shape coefficients of the largest tree in a spanning forest. Ratios are exact
// and unset when the tree has fewer than three nodes.
struct TopologyReport {
  int N = 0;
  int d = 0;
  int l = 0;
  int b = 0;
  std::optional<Ratio> norm_diameter;      // d / (N - 1)
  std::optional<Ratio> norm_diameter_alt;  // d / N
  std::optional<Ratio> shape_gap;          // |d - l| / N
  int component_count = 0;
};

TopologyReport topology_report(const TreeShape& tree, int component_count);

// The largest component wins; ties go to the one holding the smallest node.
template <typename Scalar>
TopologyReport topology_report(const SpanningForest<Scalar>& forest) {
  if (forest.components.empty()) return TopologyReport{};
  std::size_t largest = 0;
  for (std::size_t c = 1; c < forest.components.size(); ++c)
    if (forest.components[c].nodes.size() > forest.components[largest].nodes.size()) largest = c;
  return topology_report(tree_shape(forest.components[largest]), static_cast<int>(forest.components.size()));
}

// {"N","d","l","b","norm_diameter","norm_diameter_alt","shape_gap","component_count"};
// ratios rounded to two decimals, null when undefined.
std::string topology_json(const TopologyReport& report);

// Plain-text summary, including a note on the two diameter normalizations.
std::string topology_text(const TopologyReport& report);

// Undirected DOT graph of a spanning forest over `network`. Nodes n<i> in index order
// with the display form as label; tree edges sorted by (a, b) carrying the
// co-occurrence count as `weight` and the distance as `len`.
std::string mst_dot(const SpanningForest<double>& forest, const ProjectedNetwork& network);

}  // namespace kwnet
