#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "eocc/dataset.hpp"
#include "eocc/dissimilarity.hpp"
#include "eocc/entropic_graph.hpp"
#include "eocc/error.hpp"
#include "eocc/fuzzy.hpp"
#include "eocc/matrix.hpp"

namespace eocc {

inline constexpr int kModelFormatVersion = 1;

/// Everything needed to score new samples.
struct TrainedModel {
  int format_version = kModelFormatVersion;
  Measure measure = Measure::WeightedEuclidean;
  MeasureParams p_star;
  std::size_t k_star = 1;
  PrototypeSet prototypes;
  std::string alphabet;
  Matrix embedded_train;  ///< one row per training vertex, one column per prototype
  Partition partition;
  std::vector<ComponentStats> components;

  double alpha = 0.5;
  double percentile_l = 50.0;
  std::uint64_t seed = 0;
  double final_eta = 1.0;
  std::size_t iterations = 0;
  std::vector<double> eta_history;  ///< best eta after each generation

  std::size_t order() const { return partition.order(); }
  double gamma() const { return static_cast<double>(embedded_train.cols()) * (1.0 - alpha); }

  friend bool operator==(const TrainedModel&, const TrainedModel&) = default;
};

/// Embeds `x` against the model prototypes with p*.
inline std::vector<double> embed_sample(const TrainedModel& model, const Sample& x) {
  std::vector<double> row(model.prototypes.size());
  for (std::size_t j = 0; j < row.size(); ++j)
    row[j] = dissimilarity(x, model.prototypes.samples[j], model.p_star, model.measure, model.alphabet);
  return row;
}

/// Membership degree and binary decision for one test sample. The model is not modified.
inline Decision score_sample(const TrainedModel& model, const Sample& x) {
  if (model.components.size() != model.partition.order())
    throw DataError("model lacks centrality thresholds for every component");
  const auto row = embed_sample(model, x);
  return decide(model.embedded_train, model.partition, model.components, model.k_star, row);
}

}  // namespace eocc
