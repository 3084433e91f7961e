#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eocc/error.hpp"
#include "eocc/matrix.hpp"

namespace eocc {

struct Edge {
  std::size_t u = 0;  ///< u < v
  std::size_t v = 0;
  double w = 0.0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected k-nearest-neighbour graph. Edges are unique, sorted by (u, v), u < v.
struct KnnGraph {
  std::size_t vertex_count = 0;
  std::size_t k = 0;
  std::vector<Edge> edges;
  friend bool operator==(const KnnGraph&, const KnnGraph&) = default;
};

/// Connected components; components are ordered by their smallest vertex and
/// each component lists its vertices in ascending order.
struct Partition {
  std::vector<std::size_t> component_of;
  std::vector<std::vector<std::size_t>> components;

  std::size_t order() const { return components.size(); }
  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Renyi order alpha and embedding dimension m; gamma = m (1 - alpha).
struct EntropyConfig {
  double alpha = 0.5;
  std::size_t m = 2;
  bool bias_term = true;  ///< include ln(beta(m, gamma)) when it is defined

  double gamma() const { return static_cast<double>(m) * (1.0 - alpha); }
};

inline EntropyConfig make_entropy_config(double alpha, std::size_t m) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  if (m == 0) throw std::invalid_argument("embedding dimension must be positive");
  return EntropyConfig{alpha, m, true};
}

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

/// Exact all-pairs neighbour ordering of a point set. Building it once lets
/// the kNN graph be extracted for every k without repeating the O(n^2 m) work.
class NeighbourTable {
public:
  explicit NeighbourTable(const Matrix& points) : n_(points.rows()), dist_(points.rows(), points.rows()) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) dist_(i, j) = dist_(j, i) = euclidean_distance(points.row(i), points.row(j));

    order_.resize(n_);
    for (std::size_t v = 0; v < n_; ++v) {
      auto& nb = order_[v];
      nb.reserve(n_ - 1);
      for (std::size_t u = 0; u < n_; ++u)
        if (u != v) nb.push_back(u);
      // ties broken by lower vertex index
      std::stable_sort(nb.begin(), nb.end(), [&](std::size_t a, std::size_t b) { return dist_(v, a) < dist_(v, b); });
    }
  }

  std::size_t size() const { return n_; }
  double distance(std::size_t a, std::size_t b) const { return dist_(a, b); }
  const std::vector<std::size_t>& neighbours(std::size_t v) const { return order_[v]; }

  /// Union-symmetrised kNN graph: edge {u, v} if either endpoint selects the other.
  KnnGraph graph(std::size_t k) const {
    if (n_ < 2) throw std::invalid_argument("knn graph needs at least 2 points");
    if (k < 1 || k > n_ - 1)
      throw std::invalid_argument("k=" + std::to_string(k) + " outside [1, " + std::to_string(n_ - 1) + "]");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n_ * k);
    for (std::size_t v = 0; v < n_; ++v)
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t u = order_[v][i];
        pairs.emplace_back(std::min(u, v), std::max(u, v));
      }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    KnnGraph g;
    g.vertex_count = n_;
    g.k = k;
    g.edges.reserve(pairs.size());
    for (auto [u, v] : pairs) g.edges.push_back(Edge{u, v, dist_(u, v)});
    return g;
  }

private:
  std::size_t n_;
  Matrix dist_;
  std::vector<std::vector<std::size_t>> order_;
};

inline KnnGraph build_knn_graph(const Matrix& points, std::size_t k) {
  if (points.rows() < 2) throw std::invalid_argument("knn graph needs at least 2 points");
  return NeighbourTable(points).graph(k);
}

/// ln(sum_e w_e^gamma) evaluated as a log-sum-exp over gamma * ln(w_e).
/// Zero-weight edges contribute nothing. Throws DegenerateError for an edgeless
/// graph or one whose total length is zero.
inline double log_graph_length(std::span<const Edge> edges, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (edges.empty()) throw DegenerateError("degenerate component: graph has no edges");
  double peak = -std::numeric_limits<double>::infinity();
  for (const auto& e : edges)
    if (e.w > 0.0) peak = std::max(peak, gamma * std::log(e.w));
  if (peak == -std::numeric_limits<double>::infinity())
    throw DegenerateError("degenerate component: all edge weights are zero");
  double acc = 0.0;
  for (const auto& e : edges)
    if (e.w > 0.0) acc += std::exp(gamma * std::log(e.w) - peak);
  return peak + std::log(acc);
}

inline double log_graph_length(const KnnGraph& g, double gamma) { return log_graph_length(g.edges, gamma); }

/// ln(beta(m, gamma)) with beta ~ (gamma / 2) ln(m / (2 pi e)); zero where beta <= 0.
inline double log_bias_term(std::size_t m, double gamma) {
  const double beta = 0.5 * gamma * std::log(static_cast<double>(m) / (2.0 * std::numbers::pi * std::numbers::e));
  return beta > 0.0 ? std::log(beta) : 0.0;
}

/// Graph-based Renyi entropy estimate from a set of edges over n vertices.
inline double renyi_entropy(std::span<const Edge> edges, const EntropyConfig& cfg, std::size_t n) {
  if (n < 2) throw DegenerateError("degenerate component: fewer than 2 vertices");
  const double gamma = cfg.gamma();
  const double bias = cfg.bias_term ? log_bias_term(cfg.m, gamma) : 0.0;
  const double log_len = log_graph_length(edges, gamma);
  return (static_cast<double>(cfg.m) / gamma) * (log_len - cfg.alpha * std::log(static_cast<double>(n)) - bias);
}

inline double renyi_entropy(const KnnGraph& g, const EntropyConfig& cfg, std::size_t n) {
  return renyi_entropy(std::span<const Edge>(g.edges), cfg, n);
}

inline double renyi_entropy(const KnnGraph& g, const EntropyConfig& cfg) { return renyi_entropy(g, cfg, g.vertex_count); }

inline Partition connected_components(const KnnGraph& g) {
  const std::size_t n = g.vertex_count;
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges) {
    const auto a = find(e.u), b = find(e.v);
    // the smaller root wins, so every root is its component's minimum vertex
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  Partition p;
  p.component_of.assign(n, 0);
  std::vector<std::size_t> id_of_root(n, n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto r = find(v);
    if (id_of_root[r] == n) {
      id_of_root[r] = p.components.size();
      p.components.emplace_back();
    }
    p.component_of[v] = id_of_root[r];
    p.components[id_of_root[r]].push_back(v);
  }
  return p;
}

/// Edges of `g` with both endpoints in `vertices` (ascending), relabelled to
/// positions within `vertices`.
inline KnnGraph induced_subgraph(const KnnGraph& g, const std::vector<std::size_t>& vertices) {
  std::vector<std::size_t> local(g.vertex_count, g.vertex_count);
  for (std::size_t i = 0; i < vertices.size(); ++i) local[vertices[i]] = i;
  KnnGraph sub;
  sub.vertex_count = vertices.size();
  sub.k = g.k;
  for (const auto& e : g.edges) {
    if (local[e.u] == g.vertex_count || local[e.v] == g.vertex_count) continue;
    const auto a = local[e.u], b = local[e.v];
    sub.edges.push_back(Edge{std::min(a, b), std::max(a, b), e.w});
  }
  std::sort(sub.edges.begin(), sub.edges.end(),
            [](const Edge& x, const Edge& y) { return x.u != y.u ? x.u < y.u : x.v < y.v; });
  return sub;
}

/// The individual terms of the alpha-Jensen difference.
struct JensenTerms {
  double whole = 0.0;              ///< entropy of the whole graph
  std::vector<double> parts;       ///< entropy per component (0 for singletons)
  std::vector<double> weights;     ///< |G_i| / n
  double difference() const {
    double mix = 0.0;
    for (std::size_t i = 0; i < parts.size(); ++i) mix += weights[i] * parts[i];
    return whole - mix;
  }
};

/// Whole-graph entropy from `whole`, component entropies from the edges of
/// `split` inside each component of `partition`. Component estimates use the
/// component size as their sample count.
inline JensenTerms jensen_terms(const KnnGraph& whole, const KnnGraph& split, const Partition& partition,
                                const EntropyConfig& cfg) {
  const std::size_t n = whole.vertex_count;
  JensenTerms t;
  t.whole = renyi_entropy(whole, cfg, n);

  std::vector<std::vector<Edge>> by_component(partition.order());
  for (const auto& e : split.edges) {
    const auto c = partition.component_of[e.u];
    if (partition.component_of[e.v] == c) by_component[c].push_back(e);
  }
  for (std::size_t c = 0; c < partition.order(); ++c) {
    const std::size_t size = partition.components[c].size();
    t.weights.push_back(static_cast<double>(size) / static_cast<double>(n));
    double h = 0.0;
    if (size >= 2) {
      try {
        h = renyi_entropy(by_component[c], cfg, size);
      } catch (const DegenerateError&) {
        h = 0.0;  // zero-length component (duplicate points)
      }
    }
    t.parts.push_back(h);
  }
  return t;
}

/// max(0, H(whole) - sum_i beta_i H(G_i)).
inline double alpha_jensen(const KnnGraph& whole, const KnnGraph& split, const Partition& partition,
                           const EntropyConfig& cfg) {
  return std::max(0.0, jensen_terms(whole, split, partition, cfg).difference());
}

/// Alpha-Jensen difference of `partition` (derived from the k-NN graph) with the
/// whole-set entropy taken on the (k+1)-NN graph.
inline double alpha_jensen(const Matrix& points, const Partition& partition, std::size_t k, const EntropyConfig& cfg) {
  if (k + 1 > points.rows() - 1) throw std::invalid_argument("alpha_jensen: k+1 must not exceed n-1");
  NeighbourTable table(points);
  return alpha_jensen(table.graph(k + 1), table.graph(k), partition, cfg);
}

/// 1 / (1 + delta)
inline double objective_eta(double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("objective_eta: delta must be non-negative");
  return 1.0 / (1.0 + delta);
}

/// One "u v w" line per edge, weights with 17 significant digits.
inline void write_edge_list(std::ostream& os, const KnnGraph& g) {
  const auto old = os.precision(17);
  for (const auto& e : g.edges) os << e.u << ' ' << e.v << ' ' << e.w << '\n';
  os.precision(old);
}

}  // namespace eocc
