#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "eocc/entropic_graph.hpp"
#include "eocc/matrix.hpp"

namespace eocc {

/// All-pairs weighted shortest-path distances (Floyd-Warshall). Unreachable pairs are +inf.
inline Matrix shortest_path_distances(const KnnGraph& g) {
  const std::size_t n = g.vertex_count;
  const double inf = std::numeric_limits<double>::infinity();
  Matrix d(n, n, inf);
  for (std::size_t v = 0; v < n; ++v) d(v, v) = 0.0;
  for (const auto& e : g.edges) {
    d(e.u, e.v) = std::min(d(e.u, e.v), e.w);
    d(e.v, e.u) = d(e.u, e.v);
  }
  for (std::size_t via = 0; via < n; ++via) {
    auto row_via = d.row(via);
    for (std::size_t i = 0; i < n; ++i) {
      const double d_iv = d(i, via);
      if (d_iv == inf) continue;
      auto row_i = d.row(i);
      for (std::size_t j = 0; j < n; ++j) {
        const double cand = d_iv + row_via[j];
        if (cand < row_i[j]) row_i[j] = cand;
      }
    }
  }
  return d;
}

/// chi(v) = sum_{u != v} 2^{-d(v, u)} over weighted shortest-path distances.
inline std::vector<double> closeness_centrality(const KnnGraph& g) {
  const std::size_t n = g.vertex_count;
  const Matrix d = shortest_path_distances(g);
  std::vector<double> chi(n, 0.0);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t u = 0; u < n; ++u)
      if (u != v) chi[v] += std::exp2(-d(v, u));  // exp2(-inf) == 0
  return chi;
}

/// Linearly interpolated l-th percentile, l in (0, 100].
inline double percentile(std::span<const double> values, double l) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty set");
  if (!(l > 0.0 && l <= 100.0)) throw std::invalid_argument("percentile must lie in (0, 100]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = l / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

struct CentralityProfile {
  std::vector<double> closeness;
  double chi_star = 0.0;            ///< max closeness
  std::vector<double> differences;  ///< chi_star - closeness(v)
  double threshold = 0.0;           ///< l-th percentile of the differences
};

inline CentralityProfile centrality_profile(const KnnGraph& subgraph, double l) {
  if (subgraph.vertex_count == 0) throw std::invalid_argument("centrality_profile: empty graph");
  CentralityProfile p;
  p.closeness = closeness_centrality(subgraph);
  p.chi_star = *std::max_element(p.closeness.begin(), p.closeness.end());
  p.differences.reserve(p.closeness.size());
  for (double c : p.closeness) p.differences.push_back(p.chi_star - c);
  p.threshold = percentile(p.differences, l);
  return p;
}

/// exp(-chi_hat^2 / (2 threshold^2)); with a zero threshold, the indicator of chi_hat == 0.
inline double membership_degree(double chi_hat, double threshold) {
  if (threshold == 0.0) return chi_hat == 0.0 ? 1.0 : 0.0;
  const double r = chi_hat / threshold;
  return std::exp(-0.5 * r * r);
}

/// Frozen training-time statistics of one decision region.
struct ComponentStats {
  double chi_star = 0.0;
  double threshold = 0.0;
  friend bool operator==(const ComponentStats&, const ComponentStats&) = default;
};

struct ComponentScore {
  double membership = 0.0;
  double chi_hat = 0.0;
};

/// Inserts `x` into the point set `component_points`, rebuilds the k-NN graph
/// over the augmented set and measures the centrality deficit of `x` against
/// the augmented maximum.
inline ComponentScore score_component(const Matrix& component_points, std::span<const double> x, std::size_t k,
                                      const ComponentStats& stats) {
  const std::size_t n = component_points.rows();
  if (n == 0) throw std::invalid_argument("score_component: empty component");
  if (n == 1) {
    // A lone training vertex has no topology to compare against; only an exact
    // coincidence in the embedding counts as membership.
    const double d = euclidean_distance(component_points.row(0), x);
    return d == 0.0 ? ComponentScore{1.0, 0.0} : ComponentScore{0.0, std::numeric_limits<double>::infinity()};
  }
  const Matrix augmented = component_points.with_row(x);
  const KnnGraph g = build_knn_graph(augmented, std::min(k, n));
  const auto chi = closeness_centrality(g);
  const double chi_star = *std::max_element(chi.begin(), chi.end());
  const double chi_hat = chi_star - chi.back();
  return ComponentScore{membership_degree(chi_hat, stats.threshold), chi_hat};
}

struct Decision {
  double membership = 0.0;
  bool accepted = false;
  std::size_t component = 0;  ///< smallest index attaining the max membership
  std::vector<double> memberships;
  std::vector<double> chi_hats;
};

/// Max-membership decision over all decision regions of an embedded model.
inline Decision decide(const Matrix& embedded_train, const Partition& partition,
                       const std::vector<ComponentStats>& stats, std::size_t k, std::span<const double> x) {
  if (stats.size() != partition.order()) throw std::invalid_argument("decide: missing centrality statistics");
  if (x.size() != embedded_train.cols()) throw std::invalid_argument("decide: embedding dimension mismatch");
  Decision dec;
  for (std::size_t c = 0; c < partition.order(); ++c) {
    const Matrix pts = embedded_train.select_rows(partition.components[c]);
    const auto s = score_component(pts, x, k, stats[c]);
    dec.memberships.push_back(s.membership);
    dec.chi_hats.push_back(s.chi_hat);
  }
  const auto best = std::max_element(dec.memberships.begin(), dec.memberships.end());  // first max
  dec.component = static_cast<std::size_t>(best - dec.memberships.begin());
  dec.membership = *best;
  dec.accepted = dec.chi_hats[dec.component] <= stats[dec.component].threshold;
  return dec;
}

}  // namespace eocc
