#include "kwnet/network.hpp"

#include <map>

#include <json.hpp>

namespace kwnet {

using nlohmann::json;
using nlohmann::ordered_json;

Eigen::SparseMatrix<std::int64_t> BipartiteNetwork::incidence() const {
  std::vector<Eigen::Triplet<std::int64_t>> triplets;
  triplets.reserve(edges.size());
  for (const auto& [k, a] : edges) triplets.emplace_back(k, a, 1);
  Eigen::SparseMatrix<std::int64_t> m(static_cast<Eigen::Index>(keyword_nodes.size()),
                                      static_cast<Eigen::Index>(article_nodes.size()));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

BipartiteNetwork build_bipartite(const Corpus& corpus, std::span<const CanonicalKeyword> keywords, FieldKind field,
                                 const SynonymMap& synonyms) {
  BipartiteNetwork net;
  std::map<std::string, int, std::less<>> index;
  for (const auto& k : keywords) {
    if (index.try_emplace(k.canonical, static_cast<int>(net.keyword_nodes.size())).second)
      net.keyword_nodes.push_back(k);
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& record : corpus.records) {
    const int article = static_cast<int>(net.article_nodes.size());
    bool any = false;
    for (const auto& k : keyword_set(record, field, synonyms)) {
      if (const auto it = index.find(k.canonical); it != index.end()) {
        edges.emplace_back(it->second, article);
        any = true;
      }
    }
    if (any) net.article_nodes.push_back(record.id);
  }
  std::sort(edges.begin(), edges.end());
  net.edges = std::move(edges);
  return net;
}

std::vector<WeightedEdge> ProjectedNetwork::edges() const {
  std::vector<WeightedEdge> out;
  for (int a = 0; a < size(); ++a)
    for (int b = a + 1; b < size(); ++b)
      if (weights(a, b) > 0) out.push_back({a, b, weights(a, b)});
  return out;
}

ProjectedNetwork project(const BipartiteNetwork& bipartite) {
  ProjectedNetwork p;
  p.nodes = bipartite.keyword_nodes;
  const auto b = bipartite.incidence();
  // Co-membership counts: (B B^T)(i, j) = articles adjacent to both i and j.
  const Eigen::SparseMatrix<std::int64_t> shared = b * Eigen::SparseMatrix<std::int64_t>(b.transpose());
  p.weights = WeightMatrix(shared);
  p.weights.diagonal().setZero();
  return p;
}

std::string_view to_string(DistanceTransform transform) {
  return transform == DistanceTransform::inverse ? "inverse" : "linear";
}

DistanceTransform parse_distance_transform(std::string_view text) {
  if (text == "inverse") return DistanceTransform::inverse;
  if (text == "linear") return DistanceTransform::linear;
  throw UsageError("unknown distance transform '" + std::string(text) + "' (expected inverse or linear)");
}

std::string network_json(const ProjectedNetwork& network) {
  ordered_json doc;
  doc["nodes"] = ordered_json::array();
  for (const auto& n : network.nodes) doc["nodes"].push_back(n.display);
  doc["edges"] = ordered_json::array();
  for (const auto& e : network.edges()) {
    ordered_json edge;
    edge["a"] = e.a;
    edge["b"] = e.b;
    edge["w"] = e.w;
    doc["edges"].push_back(std::move(edge));
  }
  return doc.dump(2) + "\n";
}

ProjectedNetwork network_from_json(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges"))
    throw SchemaError("$", "expected an object with \"nodes\" and \"edges\"");
  const auto& nodes = doc["nodes"];
  const auto& edges = doc["edges"];
  if (!nodes.is_array()) throw SchemaError("$.nodes", "expected an array");
  if (!edges.is_array()) throw SchemaError("$.edges", "expected an array");

  ProjectedNetwork p;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string path = "$.nodes[" + std::to_string(i) + "]";
    if (!nodes[i].is_string()) throw SchemaError(path, "expected a string");
    auto k = normalize(nodes[i].get<std::string>());
    if (!k) throw SchemaError(path, "empty keyword");
    for (const auto& existing : p.nodes)
      if (existing == *k) throw SchemaError(path, "duplicate node " + k->canonical);
    p.nodes.push_back(std::move(*k));
  }
  const int n = p.size();
  p.weights = WeightMatrix::Zero(n, n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string path = "$.edges[" + std::to_string(i) + "]";
    const auto& e = edges[i];
    for (const char* key : {"a", "b", "w"})
      if (!e.is_object() || !e.contains(key) || !e[key].is_number_integer())
        throw SchemaError(path, std::string("expected integer \"") + key + "\"");
    const auto a = e["a"].get<std::int64_t>();
    const auto b = e["b"].get<std::int64_t>();
    const auto w = e["w"].get<std::int64_t>();
    if (a < 0 || b >= n || a >= b) throw SchemaError(path, "requires 0 <= a < b < node count");
    if (w < 1) throw SchemaError(path + ".w", "weight must be at least 1");
    if (p.weights(a, b) != 0) throw SchemaError(path, "duplicate edge");
    p.weights(a, b) = w;
    p.weights(b, a) = w;
  }
  return p;
}

}  // namespace kwnet
