#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "eocc/error.hpp"

namespace eocc {

enum class SampleKind { Vector, Sequence };

/// A raw input sample: a real vector or a symbol sequence, optionally labelled.
struct Sample {
  std::variant<std::vector<double>, std::string> value;
  std::optional<std::string> label;

  static Sample vector(std::vector<double> v, std::optional<std::string> label = std::nullopt) {
    return Sample{std::move(v), std::move(label)};
  }
  static Sample sequence(std::string s, std::optional<std::string> label = std::nullopt) {
    return Sample{std::move(s), std::move(label)};
  }

  SampleKind kind() const {
    return std::holds_alternative<std::string>(value) ? SampleKind::Sequence : SampleKind::Vector;
  }
  const std::vector<double>& as_vector() const { return std::get<std::vector<double>>(value); }
  const std::string& as_sequence() const { return std::get<std::string>(value); }

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Ordered, homogeneous collection of samples.
struct Dataset {
  std::string name;
  std::vector<Sample> samples;
  SampleKind kind = SampleKind::Vector;
  std::size_t dimension = 0;  ///< feature count (vectors only)
  std::string alphabet;       ///< sorted distinct symbols (sequences only)

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  const Sample& operator[](std::size_t i) const { return samples[i]; }

  bool labelled() const {
    return !samples.empty() &&
           std::all_of(samples.begin(), samples.end(), [](const Sample& s) { return s.label.has_value(); });
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

inline std::string infer_alphabet(const std::vector<Sample>& samples) {
  std::set<char> symbols;
  for (const auto& s : samples) {
    if (s.kind() == SampleKind::Sequence) symbols.insert(s.as_sequence().begin(), s.as_sequence().end());
  }
  return {symbols.begin(), symbols.end()};
}

/// Builds a dataset from samples, inferring kind, dimension and alphabet.
/// Throws DataError on empty, mixed, ragged or non-finite input.
inline Dataset make_dataset(std::vector<Sample> samples, std::string name = {}) {
  if (samples.empty()) throw DataError("dataset is empty");
  Dataset ds;
  ds.name = std::move(name);
  ds.kind = samples.front().kind();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].kind() != ds.kind) throw DataError("sample " + std::to_string(i) + ": mixed sample kinds");
  }
  if (ds.kind == SampleKind::Vector) {
    ds.dimension = samples.front().as_vector().size();
    if (ds.dimension == 0) throw DataError("vector samples must have at least one feature");
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& v = samples[i].as_vector();
      if (v.size() != ds.dimension) throw DataError("sample " + std::to_string(i) + ": ragged feature vector");
      if (!std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); }))
        throw DataError("sample " + std::to_string(i) + ": non-finite value");
    }
  } else {
    ds.alphabet = infer_alphabet(samples);
  }
  ds.samples = std::move(samples);
  return ds;
}

/// Samples at `indices`, keeping dataset metadata.
inline Dataset subset(const Dataset& ds, const std::vector<std::size_t>& indices) {
  Dataset out;
  out.name = ds.name;
  out.kind = ds.kind;
  out.dimension = ds.dimension;
  out.alphabet = ds.alphabet;
  out.samples.reserve(indices.size());
  for (auto i : indices) out.samples.push_back(ds.samples.at(i));
  return out;
}

}  // namespace eocc
