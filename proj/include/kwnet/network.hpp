#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "kwnet/cooccur.hpp"
#include "kwnet/errors.hpp"
#include "kwnet/keyword.hpp"
#include "kwnet/record.hpp"

namespace kwnet {

using WeightMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using DistanceMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Keyword/article two-mode network. Edges only join a keyword to an article.
struct BipartiteNetwork {
  std::vector<CanonicalKeyword> keyword_nodes;
  std::vector<std::string> article_nodes;
  std::vector<std::pair<int, int>> edges;  // (keyword index, article index), sorted, unique

  // keywords x articles, 1 where an edge exists.
  Eigen::SparseMatrix<std::int64_t> incidence() const;
};

// Article partition: records whose keyword set meets `keywords`. Keyword nodes keep
// the given order (duplicates dropped); article nodes keep corpus order.
BipartiteNetwork build_bipartite(const Corpus& corpus, std::span<const CanonicalKeyword> keywords,
                                 FieldKind field, const SynonymMap& synonyms = {});

inline BipartiteNetwork build_bipartite(const Corpus& corpus, const RankedKeywords& ranked, FieldKind field,
                                        const SynonymMap& synonyms = {}) {
  const auto keywords = ranked.keywords();
  return build_bipartite(corpus, std::span<const CanonicalKeyword>(keywords), field, synonyms);
}

struct WeightedEdge {
  int a = 0;
  int b = 0;
  std::int64_t w = 0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

// One-mode projection onto keywords. weights(i, j) is the number of shared articles,
// 0 where there is no edge; symmetric with a zero diagonal.
struct ProjectedNetwork {
  std::vector<CanonicalKeyword> nodes;
  WeightMatrix weights;

  int size() const { return static_cast<int>(nodes.size()); }
  std::int64_t weight(int i, int j) const { return weights(i, j); }

  // Present edges with a < b, sorted by (a, b).
  std::vector<WeightedEdge> edges() const;
};

ProjectedNetwork project(const BipartiteNetwork& bipartite);

enum class DistanceTransform {
  inverse,  // d = 1 / w
  linear,   // d = 1 - w / max(w)
};

std::string_view to_string(DistanceTransform transform);
DistanceTransform parse_distance_transform(std::string_view text);

// How a scalar type spells "no co-occurrence". Floating types use +infinity; exact
// types without an infinity must specialize this.
template <typename Scalar>
struct DistanceTraits {
  static_assert(std::numeric_limits<Scalar>::has_infinity,
                "specialize kwnet::DistanceTraits for scalars without infinity");
  static Scalar absent() { return std::numeric_limits<Scalar>::infinity(); }
  static bool is_absent(const Scalar& d) { return !(d < absent()); }
};

template <typename Scalar = double>
DistanceMatrix<Scalar> to_distances(const ProjectedNetwork& network,
                                    DistanceTransform transform = DistanceTransform::inverse) {
  const Eigen::Index n = network.size();
  DistanceMatrix<Scalar> d(n, n);
  const std::int64_t max_w = n > 0 ? network.weights.maxCoeff() : 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::int64_t w = network.weights(i, j);
      if (i == j) {
        d(i, j) = Scalar(0);
      } else if (w <= 0) {
        d(i, j) = DistanceTraits<Scalar>::absent();
      } else if (transform == DistanceTransform::inverse) {
        d(i, j) = Scalar(1) / Scalar(w);
      } else {
        d(i, j) = Scalar(1) - Scalar(w) / Scalar(max_w);
      }
    }
  }
  return d;
}

// Network JSON: {"nodes":[text],"edges":[{"a","b","w"}]} with a < b sorted by (a, b).
// Node text is the display form.
std::string network_json(const ProjectedNetwork& network);
ProjectedNetwork network_from_json(std::string_view json_text);

}  // namespace kwnet
