#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eocc/dataset.hpp"
#include "eocc/error.hpp"
#include "eocc/model.hpp"
#include "eocc/trainer.hpp"

namespace eocc {

/// Mann-Whitney AUC: P(nominal score > outlier score) with ties counted 1/2.
inline double compute_auc(std::span<const double> nominal, std::span<const double> outlier) {
  if (nominal.empty() || outlier.empty()) throw std::invalid_argument("compute_auc: both classes must be non-empty");
  struct Entry {
    double score;
    bool nominal;
  };
  std::vector<Entry> all;
  all.reserve(nominal.size() + outlier.size());
  for (double s : nominal) all.push_back({s, true});
  for (double s : outlier) all.push_back({s, false});
  std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.score < b.score; });

  // rank sum of the nominal class, ties receiving their average rank
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t)
      if (all[t].nominal) rank_sum += avg_rank;
    i = j;
  }
  const double n1 = static_cast<double>(nominal.size());
  const double n0 = static_cast<double>(outlier.size());
  return (rank_sum - n1 * (n1 + 1.0) / 2.0) / (n1 * n0);
}

inline constexpr const char* kEvalProtocol =
    "protocol v1: per repeat, nominal class split 50/50 (seeded shuffle) into train/test; "
    "train on nominal train half only; test = nominal test half + all non-nominal samples; "
    "AUC over continuous memberships";

struct EvalRun {
  std::uint64_t seed = 0;
  double auc = 0.0;
  std::size_t order = 0;  ///< decision regions of the trained model
  std::size_t k_star = 0;
  double final_eta = 1.0;
};

struct EvalReport {
  std::string protocol = kEvalProtocol;
  std::string nominal_label;
  std::size_t n_train = 0;
  std::size_t n_nominal_test = 0;
  std::size_t n_outlier_test = 0;
  std::vector<EvalRun> runs;
  double mean_auc = 0.0;
  double stddev_auc = 0.0;  ///< sample standard deviation; 0 for a single run

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

struct NominalSplit {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded shuffle of the nominal indices, first `fraction` for training.
inline NominalSplit split_nominal(std::vector<std::size_t> nominal, double fraction, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::shuffle(nominal.begin(), nominal.end(), rng);
  const auto n_train = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(nominal.size())));
  NominalSplit s;
  s.train.assign(nominal.begin(), nominal.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(nominal.begin() + static_cast<std::ptrdiff_t>(n_train), nominal.end());
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

/// Called once per repeat with the trained model and its training set.
using RunObserver = std::function<void(const TrainedModel&, const Dataset&)>;

/// Repeated one-class evaluation; repeat r uses seed cfg.seed + r for both the split and the trainer.
inline EvalReport run_experiment(const Dataset& ds, const std::string& nominal_label, double split_fraction,
                                 std::size_t repeats, const TrainerConfig& cfg, Measure measure,
                                 const RunObserver& observe = {}) {
  if (!ds.labelled()) throw DataError("run_experiment: dataset must be labelled");
  if (repeats < 1) throw std::invalid_argument("run_experiment: repeats must be >= 1");
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) throw std::invalid_argument("split fraction must lie in (0, 1)");
  std::vector<std::size_t> nominal, outliers;
  for (std::size_t i = 0; i < ds.size(); ++i) (*ds[i].label == nominal_label ? nominal : outliers).push_back(i);
  if (nominal.empty()) throw DataError("nominal label '" + nominal_label + "' not present in dataset");
  if (nominal.size() < 8) throw DataError("nominal class has fewer than 8 samples");
  if (outliers.empty()) throw DataError("dataset has no non-nominal samples");

  EvalReport rep;
  rep.nominal_label = nominal_label;
  rep.n_outlier_test = outliers.size();
  for (std::size_t r = 0; r < repeats; ++r) {
    TrainerConfig run_cfg = cfg;
    run_cfg.seed = cfg.seed + r;
    const auto split = split_nominal(nominal, split_fraction, run_cfg.seed);
    rep.n_train = split.train.size();
    rep.n_nominal_test = split.test.size();

    const Dataset train_set = subset(ds, split.train);
    const TrainedModel model = train(train_set, measure, run_cfg);
    if (observe) observe(model, train_set);
    std::vector<double> nom_scores, out_scores;
    for (auto i : split.test) nom_scores.push_back(score_sample(model, ds[i]).membership);
    for (auto i : outliers) out_scores.push_back(score_sample(model, ds[i]).membership);
    rep.runs.push_back({run_cfg.seed, compute_auc(nom_scores, out_scores), model.order(), model.k_star, model.final_eta});
  }

  double sum = 0.0;
  for (const auto& run : rep.runs) sum += run.auc;
  rep.mean_auc = sum / static_cast<double>(repeats);
  if (repeats > 1) {
    double ss = 0.0;
    for (const auto& run : rep.runs) ss += (run.auc - rep.mean_auc) * (run.auc - rep.mean_auc);
    rep.stddev_auc = std::sqrt(ss / static_cast<double>(repeats - 1));
  }
  return rep;
}

}  // namespace eocc
