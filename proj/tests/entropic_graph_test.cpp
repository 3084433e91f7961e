#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "eocc/entropic_graph.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace eocc;

namespace {

std::set<std::pair<std::size_t, std::size_t>> edge_pairs(const KnnGraph& g) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (const auto& e : g.edges) out.insert({e.u, e.v});
  return out;
}

KnnGraph graph_from(std::size_t n, std::vector<Edge> edges) {
  KnnGraph g;
  g.vertex_count = n;
  g.k = 1;
  g.edges = std::move(edges);
  return g;
}

Matrix scaled(const Matrix& m, double c) {
  Matrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = c * m(i, j);
  return out;
}

}  // namespace

TEST(KnnGraph, TwoPoints) {
  const Matrix pts = to_matrix({{0, 0}, {3, 4}});
  const auto g = build_knn_graph(pts, 1);
  ASSERT_EQ(g.edges.size(), 1u);
  EXPECT_EQ(g.edges[0], (Edge{0, 1, 5.0}));
}

TEST(KnnGraph, CollinearPoints) {
  const auto g = build_knn_graph(to_matrix({{0}, {1}, {3}}), 1);
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.edges[0], (Edge{0, 1, 1.0}));
  EXPECT_EQ(g.edges[1], (Edge{1, 2, 2.0}));
}

TEST(KnnGraph, TiesBrokenByLowerIndex) {
  // vertex 1 is equidistant from 0 and 2 and must select 0
  const auto g = build_knn_graph(to_matrix({{0}, {1}, {2}, {2.5}}), 1);
  EXPECT_EQ(edge_pairs(g), (std::set<std::pair<std::size_t, std::size_t>>{{0, 1}, {2, 3}}));
}

TEST(KnnGraph, RangeErrors) {
  const Matrix pts = to_matrix({{0}, {1}, {2}});
  EXPECT_THROW(build_knn_graph(pts, 0), std::invalid_argument);
  EXPECT_THROW(build_knn_graph(pts, 3), std::invalid_argument);
  EXPECT_THROW(build_knn_graph(to_matrix({{0}}), 1), std::invalid_argument);
}

TEST(KnnGraph, MatchesBruteForceOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pts = oracle::random_points(rng, 20, 3);
    const Matrix m = to_matrix(pts);
    for (std::size_t k = 1; k < 20; ++k) {
      const auto g = build_knn_graph(m, k);
      EXPECT_EQ(edge_pairs(g), oracle::knn_edges(pts, k)) << "k=" << k;
    }
  }
}

TEST(KnnGraph, StructuralInvariants) {
  std::mt19937_64 rng(5);
  const auto pts = oracle::random_points(rng, 30, 4);
  const Matrix m = to_matrix(pts);
  for (std::size_t k : {1u, 3u, 7u}) {
    const auto g = build_knn_graph(m, k);
    std::vector<std::size_t> degree(30, 0);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
      const auto& e = g.edges[i];
      EXPECT_LT(e.u, e.v);
      if (i) EXPECT_TRUE(std::pair(g.edges[i - 1].u, g.edges[i - 1].v) < std::pair(e.u, e.v));
      EXPECT_NEAR(e.w, oracle::dist(pts[e.u], pts[e.v]), 1e-12);
      ++degree[e.u];
      ++degree[e.v];
    }
    for (auto d : degree) EXPECT_GE(d, k);
  }
}

TEST(KnnGraph, Deterministic) {
  std::mt19937_64 rng(8);
  const Matrix m = to_matrix(oracle::random_points(rng, 25, 5));
  EXPECT_EQ(build_knn_graph(m, 4), build_knn_graph(m, 4));
}

TEST(KnnGraph, NestedInK) {
  std::mt19937_64 rng(9);
  const Matrix m = to_matrix(oracle::random_points(rng, 25, 2));
  const NeighbourTable t(m);
  for (std::size_t k = 1; k + 1 < 25; ++k) {
    const auto small = edge_pairs(t.graph(k));
    const auto big = edge_pairs(t.graph(k + 1));
    EXPECT_TRUE(std::includes(big.begin(), big.end(), small.begin(), small.end()));
  }
}

TEST(ComponentOrder, NonIncreasingInK) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = to_matrix(oracle::random_points(rng, 30, 2));
    const NeighbourTable t(m);
    std::size_t prev = 30;
    for (std::size_t k = 1; k < 30; ++k) {
      const auto d = connected_components(t.graph(k)).order();
      EXPECT_LE(d, prev);
      prev = d;
    }
    EXPECT_EQ(prev, 1u);
  }
}

TEST(LogGraphLength, Examples) {
  EXPECT_EQ(log_graph_length(graph_from(2, {{0, 1, 1.0}}), 2.0), 0.0);
  EXPECT_NEAR(log_graph_length(graph_from(3, {{0, 1, 1.0}, {1, 2, 2.0}}), 1.0), 1.0986122886681098, 1e-14);
  EXPECT_NEAR(log_graph_length(graph_from(3, {{0, 1, 0.0}, {1, 2, 2.0}}), 3.0), 2.0794415416798357, 1e-14);
}

TEST(LogGraphLength, DegenerateGraphs) {
  EXPECT_THROW(log_graph_length(graph_from(2, {}), 1.0), DegenerateError);
  EXPECT_THROW(log_graph_length(graph_from(2, {{0, 1, 0.0}}), 1.0), DegenerateError);
}

TEST(LogGraphLength, AgreesWithDirectSum) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> w(0.05, 5.0);
  for (double gamma : {0.25, 0.5, 1.0, 2.5, 6.0}) {
    std::vector<Edge> edges;
    double direct = 0.0;
    for (std::size_t i = 0; i < 40; ++i) {
      edges.push_back({i, i + 1, w(rng)});
      direct += std::pow(edges.back().w, gamma);
    }
    EXPECT_NEAR(log_graph_length(graph_from(41, edges), gamma), std::log(direct), 1e-9 * std::abs(std::log(direct)) + 1e-12);
  }
}

TEST(LogGraphLength, HugeExponentStaysFinite) {
  // w^gamma overflows a double here, its logarithm does not
  const auto g = graph_from(3, {{0, 1, 1e3}, {1, 2, 2e3}});
  const double v = log_graph_length(g, 400.0);
  EXPECT_TRUE(std::isfinite(v));
  EXPECT_NEAR(v, 400.0 * std::log(2e3) + std::log1p(std::pow(0.5, 400.0)), 1e-9);
}

TEST(RenyiEntropy, ClosedFormWithPositiveBias) {
  // m = 20, gamma = 10 (alpha = 0.5), n = 10, L = 1 + 2^10
  const auto cfg = make_entropy_config(0.5, 20);
  ASSERT_DOUBLE_EQ(cfg.gamma(), 10.0);
  EXPECT_NEAR(log_bias_term(20, 10.0), -0.23663916415878947, 1e-14);
  EXPECT_NEAR(renyi_entropy(graph_from(10, {{0, 1, 1.0}, {1, 2, 2.0}}), cfg, 10), 12.035589018468551, 1e-12);
}

TEST(RenyiEntropy, BiasDroppedBelowTwoPiE) {
  EXPECT_EQ(log_bias_term(5, 2.5), 0.0);
  EXPECT_EQ(log_bias_term(17, 8.5), 0.0);
}

TEST(RenyiEntropy, ShiftLawUnderScaling) {
  std::mt19937_64 rng(4);
  for (std::size_t n : {20u, 100u}) {
    for (std::size_t m : {5u, 50u}) {
      const Matrix pts = to_matrix(oracle::random_points(rng, n, m));
      const auto cfg = make_entropy_config(0.5, m);
      const double base = renyi_entropy(build_knn_graph(pts, 3), cfg, n);
      for (double c : {0.5, 2.0, 10.0}) {
        const double shifted = renyi_entropy(build_knn_graph(scaled(pts, c), 3), cfg, n);
        const double expected = static_cast<double>(m) * std::log(c);
        EXPECT_NEAR(shifted - base, expected, 1e-9 * std::abs(expected)) << "n=" << n << " m=" << m << " c=" << c;
      }
    }
  }
}

TEST(RenyiEntropy, DegenerateWithoutEdges) {
  EXPECT_THROW(renyi_entropy(graph_from(1, {}), make_entropy_config(0.5, 4), 1), DegenerateError);
  EXPECT_THROW(renyi_entropy(graph_from(3, {}), make_entropy_config(0.5, 4), 3), DegenerateError);
}

TEST(EntropyConfig, Validation) {
  EXPECT_THROW(make_entropy_config(0.0, 3), std::invalid_argument);
  EXPECT_THROW(make_entropy_config(1.0, 3), std::invalid_argument);
  EXPECT_THROW(make_entropy_config(0.5, 0), std::invalid_argument);
  const auto cfg = make_entropy_config(0.25, 8);
  EXPECT_DOUBLE_EQ(cfg.gamma(), 6.0);
}

TEST(ConnectedComponents, Path) {
  const auto p = connected_components(graph_from(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}));
  EXPECT_EQ(p.order(), 1u);
}

TEST(ConnectedComponents, TwoDisjointEdges) {
  const auto p = connected_components(graph_from(4, {{0, 1, 1}, {2, 3, 1}}));
  ASSERT_EQ(p.order(), 2u);
  EXPECT_EQ(p.components[0], (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(p.components[1], (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(p.component_of, (std::vector<std::size_t>{0, 0, 1, 1}));
}

TEST(ConnectedComponents, OrderedBySmallestMember) {
  const auto p = connected_components(graph_from(5, {{1, 4, 1}, {0, 3, 1}}));
  ASSERT_EQ(p.order(), 3u);
  EXPECT_EQ(p.components[0], (std::vector<std::size_t>{0, 3}));
  EXPECT_EQ(p.components[1], (std::vector<std::size_t>{1, 4}));
  EXPECT_EQ(p.components[2], (std::vector<std::size_t>{2}));
}

TEST(ConnectedComponents, MatchesBfsOracle) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 5 + rng() % 40;
    const std::size_t m = rng() % (2 * n);
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t a = rng() % n, b = rng() % n;
      if (a != b) pairs.insert({std::min(a, b), std::max(a, b)});
    }
    std::vector<Edge> edges;
    std::vector<std::pair<std::size_t, std::size_t>> plain;
    for (auto [a, b] : pairs) {
      edges.push_back({a, b, 1.0});
      plain.push_back({a, b});
    }
    EXPECT_EQ(connected_components(graph_from(n, edges)).components, oracle::bfs_components(n, plain));
  }
}

TEST(AlphaJensen, SameGraphSingleComponentIsZero) {
  std::mt19937_64 rng(12);
  const Matrix pts = to_matrix(oracle::random_points(rng, 30, 3));
  const auto g = build_knn_graph(pts, 5);
  const auto part = connected_components(g);
  ASSERT_EQ(part.order(), 1u);
  EXPECT_EQ(alpha_jensen(g, g, part, make_entropy_config(0.5, 3)), 0.0);
}

TEST(AlphaJensen, NeverNegative) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix pts = to_matrix(oracle::random_points(rng, 25, 4));
    for (std::size_t k = 1; k <= 5; ++k) {
      const auto part = connected_components(build_knn_graph(pts, k));
      EXPECT_GE(alpha_jensen(pts, part, k, make_entropy_config(0.5, 4)), 0.0);
    }
  }
}

TEST(AlphaJensen, SingletonComponentsContributeZero) {
  const Matrix pts = to_matrix({{0}, {1}, {2}, {50}});
  const auto g = build_knn_graph(pts, 2);
  Partition part;
  part.component_of = {0, 0, 0, 1};
  part.components = {{0, 1, 2}, {3}};
  const auto t = jensen_terms(g, g, part, make_entropy_config(0.5, 1));
  EXPECT_EQ(t.parts[1], 0.0);
  EXPECT_DOUBLE_EQ(t.weights[0], 0.75);
  EXPECT_DOUBLE_EQ(t.weights[1], 0.25);
}

TEST(AlphaJensen, InvariantToBiasBranch) {
  std::mt19937_64 rng(14);
  for (std::size_t m : {4u, 40u}) {
    const Matrix pts = to_matrix(oracle::random_points(rng, 40, m));
    const NeighbourTable t(pts);
    const auto part = connected_components(t.graph(2));
    auto with = make_entropy_config(0.5, m);
    auto without = with;
    without.bias_term = false;
    const double a = jensen_terms(t.graph(3), t.graph(2), part, with).difference();
    const double b = jensen_terms(t.graph(3), t.graph(2), part, without).difference();
    EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, std::abs(a)));
  }
}

TEST(AlphaJensen, RequiresRoomForKPlusOne) {
  const Matrix pts = to_matrix({{0}, {1}, {2}});
  Partition p;
  p.component_of = {0, 0, 0};
  p.components = {{0, 1, 2}};
  EXPECT_THROW(alpha_jensen(pts, p, 2, make_entropy_config(0.5, 1)), std::invalid_argument);
}

TEST(ObjectiveEta, Examples) {
  EXPECT_EQ(objective_eta(0.0), 1.0);
  EXPECT_EQ(objective_eta(1.0), 0.5);
  EXPECT_EQ(objective_eta(3.0), 0.25);
  EXPECT_THROW(objective_eta(-0.1), std::invalid_argument);
  EXPECT_THROW(objective_eta(NAN), std::invalid_argument);
}

TEST(ObjectiveEta, StrictlyDecreasingAndBounded) {
  double prev = objective_eta(0.0);
  for (double d = 0.01; d < 100.0; d *= 1.5) {
    const double e = objective_eta(d);
    EXPECT_LT(e, prev);
    EXPECT_GT(e, 0.0);
    prev = e;
  }
}

TEST(EdgeList, SeventeenSignificantDigits) {
  std::ostringstream os;
  write_edge_list(os, graph_from(2, {{0, 1, 0.1}}));
  EXPECT_EQ(os.str(), "0 1 0.10000000000000001\n");
}
