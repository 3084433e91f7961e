#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eocc/dataset.hpp"
#include "eocc/error.hpp"
#include "eocc/matrix.hpp"

namespace eocc {

/// Input-space dissimilarity measures with a numeric parameter vector.
enum class Measure { WeightedEuclidean, WeightedEdit };

inline std::string to_string(Measure m) {
  return m == Measure::WeightedEuclidean ? "weighted_euclidean" : "weighted_edit";
}

inline Measure measure_from_string(std::string_view s) {
  if (s == "weighted_euclidean") return Measure::WeightedEuclidean;
  if (s == "weighted_edit") return Measure::WeightedEdit;
  throw DataError("unknown measure '" + std::string(s) + "'");
}

inline Measure default_measure(SampleKind kind) {
  return kind == SampleKind::Vector ? Measure::WeightedEuclidean : Measure::WeightedEdit;
}

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
  double clamp(double x) const { return std::clamp(x, lo, hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Parameter vector p of a measure together with its search box.
struct MeasureParams {
  std::vector<double> values;
  std::vector<Interval> bounds;

  std::size_t size() const { return values.size(); }
  bool within_bounds() const {
    if (values.size() != bounds.size()) return false;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (!bounds[i].contains(values[i])) return false;
    return true;
  }
  friend bool operator==(const MeasureParams&, const MeasureParams&) = default;
};

/// Smallest admissible edit-operation weight; the search box is [kMinEditWeight, 1].
inline constexpr double kMinEditWeight = 0.01;

/// Neutral parameters: unit weights for every feature, or unit edit costs.
inline MeasureParams neutral_params(Measure m, std::size_t feature_count) {
  MeasureParams p;
  if (m == Measure::WeightedEuclidean) {
    if (feature_count == 0) throw std::invalid_argument("weighted euclidean needs at least one feature");
    p.values.assign(feature_count, 1.0);
    p.bounds.assign(feature_count, Interval{0.0, 1.0});
  } else {
    p.values.assign(3, 1.0);
    p.bounds.assign(3, Interval{kMinEditWeight, 1.0});
  }
  return p;
}

/// sqrt(sum_i p_i (x_i - y_i)^2)
inline double weighted_euclidean(std::span<const double> x, std::span<const double> y, const MeasureParams& p) {
  if (x.size() != y.size() || x.size() != p.values.size())
    throw DataError("weighted_euclidean: dimension mismatch (" + std::to_string(x.size()) + ", " +
                    std::to_string(y.size()) + ", p=" + std::to_string(p.values.size()) + ")");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw DataError("weighted_euclidean: non-finite input");
    const double diff = x[i] - y[i];
    acc += p.values[i] * diff * diff;
  }
  return std::sqrt(acc);
}

/// Levenshtein distance with per-operation costs p = (insertion, deletion, substitution).
/// Insertions add symbols of `t`, deletions remove symbols of `s`.
/// If `alphabet` is non-empty every symbol must belong to it.
inline double weighted_edit_distance(std::string_view s, std::string_view t, const MeasureParams& p,
                                     std::string_view alphabet = {}) {
  if (p.values.size() != 3) throw std::invalid_argument("weighted_edit_distance: expects 3 weights (ins, del, sub)");
  const double w_ins = p.values[0];
  const double w_del = p.values[1];
  const double w_sub = p.values[2];
  if (!alphabet.empty()) {
    for (std::string_view seq : {s, t})
      for (char c : seq)
        if (alphabet.find(c) == std::string_view::npos)
          throw DataError(std::string("weighted_edit_distance: symbol '") + c + "' outside alphabet");
  }

  // Single rolling row of the DP table.
  std::vector<double> row(t.size() + 1);
  for (std::size_t j = 0; j <= t.size(); ++j) row[j] = static_cast<double>(j) * w_ins;
  for (std::size_t i = 1; i <= s.size(); ++i) {
    double diag = row[0];
    row[0] = static_cast<double>(i) * w_del;
    for (std::size_t j = 1; j <= t.size(); ++j) {
      const double up = row[j];
      const double sub = diag + (s[i - 1] == t[j - 1] ? 0.0 : w_sub);
      row[j] = std::min({up + w_del, row[j - 1] + w_ins, sub});
      diag = up;
    }
  }
  return row[t.size()];
}

/// Measure applied to two raw samples.
inline double dissimilarity(const Sample& a, const Sample& b, const MeasureParams& p, Measure m,
                            std::string_view alphabet = {}) {
  if (m == Measure::WeightedEuclidean) {
    if (a.kind() != SampleKind::Vector || b.kind() != SampleKind::Vector)
      throw DataError("weighted_euclidean requires vector samples");
    return weighted_euclidean(a.as_vector(), b.as_vector(), p);
  }
  if (a.kind() != SampleKind::Sequence || b.kind() != SampleKind::Sequence)
    throw DataError("weighted_edit requires sequence samples");
  return weighted_edit_distance(a.as_sequence(), b.as_sequence(), p, alphabet);
}

/// Representation set: the prototypes the embedding is computed against.
struct PrototypeSet {
  std::vector<std::size_t> indices;  ///< into the dataset the set was drawn from
  std::vector<Sample> samples;

  std::size_t size() const { return samples.size(); }
  friend bool operator==(const PrototypeSet&, const PrototypeSet&) = default;
};

/// All samples when n <= max_size, otherwise max_size indices drawn uniformly
/// without replacement (returned in ascending order).
inline PrototypeSet select_prototypes(const Dataset& ds, std::size_t max_size, std::uint64_t seed) {
  if (max_size < 2) throw std::invalid_argument("select_prototypes: max_size must be >= 2");
  if (ds.empty()) throw DataError("select_prototypes: dataset is empty");
  const std::size_t n = ds.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (n > max_size) {
    std::mt19937_64 rng(seed);
    // partial Fisher-Yates
    for (std::size_t i = 0; i < max_size; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(idx[i], idx[pick(rng)]);
    }
    idx.resize(max_size);
    std::sort(idx.begin(), idx.end());
  }
  PrototypeSet r;
  r.indices = idx;
  r.samples.reserve(idx.size());
  for (auto i : idx) r.samples.push_back(ds.samples[i]);
  return r;
}

/// Dissimilarity-space representation: entry (i, j) = d(samples[i], prototypes[j]; p).
inline Matrix embed(std::span<const Sample> samples, const PrototypeSet& prototypes, const MeasureParams& p,
                    Measure m, std::string_view alphabet = {}) {
  if (prototypes.samples.empty()) throw std::invalid_argument("embed: empty prototype set");
  Matrix d(samples.size(), prototypes.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = 0; j < prototypes.size(); ++j)
      d(i, j) = dissimilarity(samples[i], prototypes.samples[j], p, m, alphabet);
  return d;
}

inline Matrix embed(const Dataset& ds, const PrototypeSet& prototypes, const MeasureParams& p, Measure m) {
  return embed(std::span<const Sample>(ds.samples), prototypes, p, m, ds.alphabet);
}

}  // namespace eocc
