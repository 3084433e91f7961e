#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "eocc/dissimilarity.hpp"
#include "eocc/entropic_graph.hpp"
#include "oracles.hpp"

using namespace eocc;

namespace {

MeasureParams weights(std::vector<double> w) {
  MeasureParams p;
  p.bounds.assign(w.size(), Interval{0.0, 1.0});
  p.values = std::move(w);
  return p;
}

MeasureParams edit_costs(double ins, double del, double sub) {
  return MeasureParams{{ins, del, sub}, std::vector<Interval>(3, Interval{kMinEditWeight, 1.0})};
}

Dataset vectors(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Sample> s;
  for (const auto& row : oracle::random_points(rng, n, dim)) s.push_back(Sample::vector(row));
  return make_dataset(std::move(s));
}

}  // namespace

TEST(WeightedEuclidean, IdentityIsZero) {
  EXPECT_EQ(weighted_euclidean(std::vector{1.0, 2.0}, std::vector{1.0, 2.0}, weights({0.3, 0.9})), 0.0);
}

TEST(WeightedEuclidean, UnitWeightsGivePlainEuclidean) {
  EXPECT_DOUBLE_EQ(weighted_euclidean(std::vector{0.0, 0.0}, std::vector{3.0, 4.0}, weights({1, 1})), 5.0);
}

TEST(WeightedEuclidean, WeightsScaleSquaredDifferences) {
  EXPECT_NEAR(weighted_euclidean(std::vector{0.0, 0.0}, std::vector{3.0, 4.0}, weights({4, 1})), 7.211102550927978, 1e-12);
}

TEST(WeightedEuclidean, ZeroWeightIgnoresCoordinate) {
  EXPECT_EQ(weighted_euclidean(std::vector{0.0, 5.0}, std::vector{0.0, -5.0}, weights({1, 0})), 0.0);
}

TEST(WeightedEuclidean, RejectsDimensionMismatchAndNonFinite) {
  EXPECT_THROW(weighted_euclidean(std::vector{0.0}, std::vector{1.0, 2.0}, weights({1, 1})), DataError);
  EXPECT_THROW(weighted_euclidean(std::vector{0.0, 1.0}, std::vector{1.0, 2.0}, weights({1})), DataError);
  EXPECT_THROW(weighted_euclidean(std::vector{NAN, 1.0}, std::vector{1.0, 2.0}, weights({1, 1})), DataError);
}

TEST(WeightedEditDistance, Examples) {
  EXPECT_EQ(weighted_edit_distance("abc", "abc", edit_costs(0.2, 0.7, 0.4)), 0.0);
  EXPECT_EQ(weighted_edit_distance("kitten", "sitting", edit_costs(1, 1, 1)), 3.0);
  EXPECT_EQ(weighted_edit_distance("ab", "", edit_costs(1, 0.5, 1)), 1.0);
  EXPECT_EQ(weighted_edit_distance("", "ab", edit_costs(0.25, 1, 1)), 0.5);
}

TEST(WeightedEditDistance, SymmetricWhenInsertEqualsDelete) {
  const auto p = edit_costs(0.6, 0.6, 0.9);
  EXPECT_EQ(weighted_edit_distance("gattaca", "tacgat", p), weighted_edit_distance("tacgat", "gattaca", p));
}

TEST(WeightedEditDistance, Errors) {
  EXPECT_THROW(weighted_edit_distance("a", "b", MeasureParams{}), std::invalid_argument);
  EXPECT_THROW(weighted_edit_distance("abx", "ab", edit_costs(1, 1, 1), "ab"), DataError);
}

TEST(WeightedEditDistance, MatchesExhaustiveEditScriptSearch) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len(0, 6), sym(0, 2);
  std::uniform_real_distribution<double> w(kMinEditWeight, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::string s, t;
    for (int i = len(rng); i > 0; --i) s.push_back("abc"[sym(rng)]);
    for (int i = len(rng); i > 0; --i) t.push_back("abc"[sym(rng)]);
    const double wi = w(rng), wd = w(rng), ws = w(rng);
    EXPECT_NEAR(weighted_edit_distance(s, t, edit_costs(wi, wd, ws)), oracle::edit_script_search(s, t, wi, wd, ws), 1e-12)
        << s << " -> " << t;
  }
}

TEST(SelectPrototypes, SmallDatasetUsesEverySample) {
  const auto ds = vectors(10, 2, 1);
  const auto r = select_prototypes(ds, 500, 3);
  ASSERT_EQ(r.indices.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(r.indices[i], i);
  EXPECT_EQ(r.samples, ds.samples);
}

TEST(SelectPrototypes, SubsampleIsDistinctAndReproducible) {
  const auto ds = vectors(1000, 2, 1);
  const auto a = select_prototypes(ds, 500, 42);
  const auto b = select_prototypes(ds, 500, 42);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.indices.size(), 500u);
  std::set<std::size_t> uniq(a.indices.begin(), a.indices.end());
  EXPECT_EQ(uniq.size(), 500u);
  EXPECT_LT(*uniq.rbegin(), 1000u);
}

TEST(SelectPrototypes, DifferentSeedsDiffer) {
  const auto ds = vectors(1000, 2, 1);
  for (std::uint64_t s = 0; s < 10; ++s) EXPECT_NE(select_prototypes(ds, 500, s).indices, select_prototypes(ds, 500, s + 100).indices);
}

TEST(SelectPrototypes, RejectsTinyMaxSize) { EXPECT_THROW(select_prototypes(vectors(5, 2, 1), 1, 0), std::invalid_argument); }

TEST(Embed, PairOfPointsAgainstThemselves) {
  const auto ds = make_dataset({Sample::vector({0, 0}), Sample::vector({3, 4})});
  const auto r = select_prototypes(ds, 500, 0);
  const Matrix d = embed(ds, r, weights({1, 1}), Measure::WeightedEuclidean);
  EXPECT_EQ(d(0, 0), 0.0);
  EXPECT_EQ(d(0, 1), 5.0);
  EXPECT_EQ(d(1, 0), 5.0);
  EXPECT_EQ(d(1, 1), 0.0);
}

TEST(Embed, SingleIdenticalSample) {
  const auto ds = make_dataset({Sample::vector({1.5, -2})});
  const Matrix d = embed(ds, select_prototypes(ds, 2, 0), weights({0.5, 0.5}), Measure::WeightedEuclidean);
  ASSERT_EQ(d.rows(), 1u);
  ASSERT_EQ(d.cols(), 1u);
  EXPECT_EQ(d(0, 0), 0.0);
}

TEST(Embed, EntriesEqualDirectPairwiseCalls) {
  const auto ds = vectors(3, 4, 9);
  const auto protos = vectors(2, 4, 10);
  PrototypeSet r{{0, 1}, protos.samples};
  const auto p = weights({0.1, 0.5, 0.9, 1.0});
  const Matrix d = embed(ds, r, p, Measure::WeightedEuclidean);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(d(i, j), weighted_euclidean(ds[i].as_vector(), protos[j].as_vector(), p));
}

TEST(Embed, RejectsMeasureVariantMismatch) {
  const auto ds = make_dataset({Sample::vector({0, 0}), Sample::vector({1, 1})});
  EXPECT_THROW(embed(ds, select_prototypes(ds, 2, 0), edit_costs(1, 1, 1), Measure::WeightedEdit), DataError);
  const auto seqs = make_dataset({Sample::sequence("ab"), Sample::sequence("ba")});
  EXPECT_THROW(embed(seqs, select_prototypes(seqs, 2, 0), weights({1}), Measure::WeightedEuclidean), DataError);
}

TEST(EmbedProperties, DiagonalIsZeroWhenSamplesArePrototypes) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto ds = vectors(15, 3, seed);
    const Matrix d = embed(ds, select_prototypes(ds, 500, 0), weights({0.2, 0.7, 1}), Measure::WeightedEuclidean);
    for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(d(i, i), 0.0);
  }
}

TEST(EmbedProperties, RowDistancesBoundedByScaledInputDistance) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto ds = vectors(12, 3, seed);
    const auto p = weights({u(rng), u(rng), u(rng)});
    const auto r = select_prototypes(ds, 500, 0);
    const Matrix d = embed(ds, r, p, Measure::WeightedEuclidean);
    const double sqrt_m = std::sqrt(static_cast<double>(r.size()));
    for (std::size_t i = 0; i < ds.size(); ++i)
      for (std::size_t j = 0; j < ds.size(); ++j) {
        const double lhs = euclidean_distance(d.row(i), d.row(j));
        const double rhs = weighted_euclidean(ds[i].as_vector(), ds[j].as_vector(), p) * sqrt_m;
        EXPECT_LE(lhs, rhs * (1 + 1e-12) + 1e-12);
      }
  }
}

TEST(EmbedProperties, PureAndBitReproducible) {
  const auto ds = make_dataset({Sample::sequence("acgt"), Sample::sequence("aggt"), Sample::sequence("ttt")});
  const auto r = select_prototypes(ds, 500, 0);
  const auto a = embed(ds, r, edit_costs(0.3, 0.8, 0.5), Measure::WeightedEdit);
  const auto b = embed(ds, r, edit_costs(0.3, 0.8, 0.5), Measure::WeightedEdit);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a(0, 1), 0.5);
}
