#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "eocc/dataset.hpp"
#include "eocc/error.hpp"

namespace eocc {

enum class Generator { Gaussians3, Uniform, CrescentFullMoon, HighDim2 };

inline Generator generator_from_string(std::string_view s) {
  if (s == "gaussians3") return Generator::Gaussians3;
  if (s == "uniform") return Generator::Uniform;
  if (s == "crescent_full_moon") return Generator::CrescentFullMoon;
  if (s == "highdim2") return Generator::HighDim2;
  throw std::invalid_argument("unknown generator '" + std::string(s) + "'");
}

inline std::string to_string(Generator g) {
  switch (g) {
    case Generator::Gaussians3: return "gaussians3";
    case Generator::Uniform: return "uniform";
    case Generator::CrescentFullMoon: return "crescent_full_moon";
    case Generator::HighDim2: return "highdim2";
  }
  return {};
}

struct SyntheticSpec {
  Generator generator = Generator::Gaussians3;
  std::size_t n = 90;
  std::size_t dim = 2;  ///< only used by highdim2 (default 100 there)
  std::uint64_t seed = 0;
};

/// Default size and dimension for each generator.
inline SyntheticSpec default_spec(Generator g, std::uint64_t seed = 0) {
  switch (g) {
    case Generator::Gaussians3: return {g, 90, 2, seed};
    case Generator::Uniform: return {g, 100, 2, seed};
    case Generator::CrescentFullMoon: return {g, 200, 2, seed};
    case Generator::HighDim2: return {g, 100, 100, seed};
  }
  return {};
}

// Geometry of the generators, in units of the cluster standard deviation.
inline constexpr double kBlobSide = 10.0;          ///< gaussians3: equilateral triangle side
inline constexpr double kMoonRadius = 5.0;         ///< crescent_full_moon: disc radius
inline constexpr double kCrescentInner = 10.0;     ///< crescent_full_moon: annulus radii
inline constexpr double kCrescentOuter = 15.0;
inline constexpr double kHighDimSeparation = 30.0; ///< highdim2: distance between the two centres

/// gaussians3: three unit-variance blobs on an equilateral triangle (labels "0".."2").
/// uniform: uniform unit square (label "0").
/// crescent_full_moon: disc ("moon") plus lower half-annulus ("crescent"); a third of the points in the disc.
/// highdim2: two unit-variance clusters in `dim` dimensions (labels "0", "1").
/// Cluster sizes differ by at most one; samples are ordered cluster by cluster.
inline Dataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n < 10) throw std::invalid_argument("synthetic datasets need at least 10 samples");
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Sample> out;
  out.reserve(spec.n);

  auto split = [&](std::size_t parts, std::size_t i) { return spec.n / parts + (i < spec.n % parts ? 1 : 0); };

  switch (spec.generator) {
    case Generator::Gaussians3: {
      const double h = kBlobSide * std::sqrt(3.0) / 2.0;
      const double centres[3][2] = {{0.0, 0.0}, {kBlobSide, 0.0}, {kBlobSide / 2.0, h}};
      for (std::size_t c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < split(3, c); ++i)
          out.push_back(Sample::vector({centres[c][0] + normal(rng), centres[c][1] + normal(rng)}, std::to_string(c)));
      break;
    }
    case Generator::Uniform:
      for (std::size_t i = 0; i < spec.n; ++i) out.push_back(Sample::vector({unit(rng), unit(rng)}, "0"));
      break;
    case Generator::CrescentFullMoon: {
      const std::size_t moon = spec.n / 3;
      for (std::size_t i = 0; i < moon; ++i) {
        // uniform in the disc
        const double r = kMoonRadius * std::sqrt(unit(rng));
        const double t = 2.0 * std::numbers::pi * unit(rng);
        out.push_back(Sample::vector({r * std::cos(t), r * std::sin(t)}, "moon"));
      }
      for (std::size_t i = moon; i < spec.n; ++i) {
        // uniform in the lower half-annulus
        const double r2 = kCrescentInner * kCrescentInner +
                          unit(rng) * (kCrescentOuter * kCrescentOuter - kCrescentInner * kCrescentInner);
        const double r = std::sqrt(r2);
        const double t = std::numbers::pi * (1.0 + unit(rng));
        out.push_back(Sample::vector({r * std::cos(t), r * std::sin(t)}, "crescent"));
      }
      break;
    }
    case Generator::HighDim2: {
      if (spec.dim < 1) throw std::invalid_argument("highdim2 needs dim >= 1");
      // centres at the origin and at kHighDimSeparation along the diagonal
      const double offset = kHighDimSeparation / std::sqrt(static_cast<double>(spec.dim));
      for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < split(2, c); ++i) {
          std::vector<double> v(spec.dim);
          for (auto& x : v) x = (c == 0 ? 0.0 : offset) + normal(rng);
          out.push_back(Sample::vector(std::move(v), std::to_string(c)));
        }
      break;
    }
  }
  return make_dataset(std::move(out), to_string(spec.generator));
}

}  // namespace eocc
