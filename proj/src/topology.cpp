#include "kwnet/topology.hpp"

#include <charconv>
#include <cstdlib>
#include <queue>

#include <json.hpp>

#include "kwnet/errors.hpp"

namespace kwnet {

namespace {

std::vector<std::vector<int>> adjacency(const TreeShape& tree) {
  if (tree.node_count < 1) throw AnalysisError("tree has no nodes");
  if (static_cast<int>(tree.edges.size()) != tree.node_count - 1)
    throw AnalysisError("not a tree: " + std::to_string(tree.node_count) + " nodes but " +
                        std::to_string(tree.edges.size()) + " edges");
  std::vector<std::vector<int>> adj(tree.node_count);
  for (const auto& [a, b] : tree.edges) {
    if (a < 0 || b < 0 || a >= tree.node_count || b >= tree.node_count || a == b)
      throw AnalysisError("not a tree: bad edge");
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

// Hop distances from `start`; -1 where unreachable.
std::vector<int> bfs(const std::vector<std::vector<int>>& adj, int start) {
  std::vector<int> dist(adj.size(), -1);
  std::queue<int> q;
  dist[start] = 0;
  q.push(start);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

int farthest(const std::vector<int>& dist) {
  int best = 0;
  for (int i = 0; i < static_cast<int>(dist.size()); ++i) {
    if (dist[i] < 0) throw AnalysisError("not a tree: disconnected");
    if (dist[i] > dist[best]) best = i;
  }
  return best;
}

}  // namespace

int diameter(const TreeShape& tree) {
  const auto adj = adjacency(tree);
  // Double sweep: the farthest node from anywhere is an end of a longest path.
  const int end = farthest(bfs(adj, 0));
  const auto dist = bfs(adj, end);
  return dist[farthest(dist)];
}

LeafBranchCount leaves_branches(const TreeShape& tree) {
  const auto adj = adjacency(tree);
  LeafBranchCount out;
  if (tree.node_count == 1) {
    out.degenerate = true;
    return out;
  }
  for (const auto& nbrs : adj) {
    if (nbrs.size() == 1) ++out.leaves;
    else if (nbrs.size() > 1) ++out.branches;
  }
  return out;
}

TopologyReport topology_report(const TreeShape& tree, int component_count) {
  TopologyReport r;
  r.component_count = component_count;
  r.N = tree.node_count;
  r.d = diameter(tree);
  const auto lb = leaves_branches(tree);
  r.l = lb.leaves;
  r.b = lb.branches;
  if (r.N >= 3) {
    r.norm_diameter = Ratio{r.d, r.N - 1};
    r.norm_diameter_alt = Ratio{r.d, r.N};
    r.shape_gap = Ratio{std::abs(r.d - r.l), r.N};
  }
  return r;
}

std::string topology_json(const TopologyReport& report) {
  auto ratio = [](const std::optional<Ratio>& r) {
    return r ? nlohmann::ordered_json(r->rounded(2)) : nlohmann::ordered_json(nullptr);
  };
  nlohmann::ordered_json doc;
  doc["N"] = report.N;
  doc["d"] = report.d;
  doc["l"] = report.l;
  doc["b"] = report.b;
  doc["norm_diameter"] = ratio(report.norm_diameter);
  doc["norm_diameter_alt"] = ratio(report.norm_diameter_alt);
  doc["shape_gap"] = ratio(report.shape_gap);
  doc["component_count"] = report.component_count;
  return doc.dump(2) + "\n";
}

std::string topology_text(const TopologyReport& report) {
  auto show = [](const std::optional<Ratio>& r) { return r ? r->fixed(2) : std::string("undefined (N < 3)"); };
  std::string out;
  out += "nodes (N)            " + std::to_string(report.N) + "\n";
  out += "diameter (d)         " + std::to_string(report.d) + "\n";
  out += "leaves (l)           " + std::to_string(report.l) + "\n";
  out += "branches (b)         " + std::to_string(report.b) + "\n";
  out += "d/(N-1)              " + show(report.norm_diameter) + "\n";
  out += "d/N                  " + show(report.norm_diameter_alt) + "\n";
  out += "|d-l|/N              " + show(report.shape_gap) + "\n";
  out += "components           " + std::to_string(report.component_count) + "\n";
  out += "note: d/(N-1) is 1 for a path and 2/(N-1) for a star. Published tables of these\n"
         "coefficients sometimes divide by N instead of N-1, so d/N is reported as well.\n";
  return out;
}

namespace {

std::string format_distance(double d) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, d);
  return ec == std::errc{} ? std::string(buf, ptr) : std::to_string(d);
}

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

}  // namespace

std::string mst_dot(const SpanningForest<double>& forest, const ProjectedNetwork& network) {
  if (forest.node_count != network.size()) throw AnalysisError("forest and network sizes differ");
  std::vector<TreeEdge<double>> edges;
  for (const auto& comp : forest.components) edges.insert(edges.end(), comp.edges.begin(), comp.edges.end());
  std::sort(edges.begin(), edges.end(), [](const auto& x, const auto& y) { return std::tie(x.a, x.b) < std::tie(y.a, y.b); });

  std::string out = "graph mst {\n";
  for (int i = 0; i < network.size(); ++i)
    out += "  n" + std::to_string(i) + " [label=\"" + dot_escape(network.nodes[i].display) + "\"];\n";
  for (const auto& e : edges) {
    out += "  n" + std::to_string(e.a) + " -- n" + std::to_string(e.b) + " [weight=" +
           std::to_string(network.weight(e.a, e.b)) + ", len=" + format_distance(e.distance) + "];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace kwnet
