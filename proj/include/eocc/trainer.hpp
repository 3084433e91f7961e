#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "eocc/dataset.hpp"
#include "eocc/dissimilarity.hpp"
#include "eocc/entropic_graph.hpp"
#include "eocc/error.hpp"
#include "eocc/fuzzy.hpp"
#include "eocc/model.hpp"

namespace eocc {

struct TrainerConfig {
  double tau = 0.05;               ///< stop once the best eta is <= tau
  std::size_t max_iterations = 50; ///< GA generations, the initial population included
  std::size_t population = 20;
  double mutation_sigma = 0.1;     ///< as a fraction of each gene's range
  double mutation_rate = 0.1;
  double crossover_rate = 0.9;
  std::size_t tournament = 3;
  std::uint64_t seed = 0;
  double alpha = 0.5;
  double percentile_l = 50.0;
  std::size_t max_train_size = 500;
  unsigned threads = 0;            ///< fitness workers; 0 = hardware concurrency

  void validate() const {
    if (!(tau >= 0.0)) throw std::invalid_argument("tau must be >= 0");
    if (population < 2) throw std::invalid_argument("population must be >= 2");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (tournament < 1) throw std::invalid_argument("tournament size must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
    if (!(percentile_l > 0.0 && percentile_l <= 100.0)) throw std::invalid_argument("percentile must lie in (0, 100]");
    if (max_train_size < 2) throw std::invalid_argument("max_train_size must be >= 2");
  }
};

struct KStep {
  std::size_t k = 0;
  double eta = 1.0;
};

/// Outcome of the descending-k search: the argmin over the visited k.
struct KSearch {
  std::size_t k_best = 0;
  double eta = std::numeric_limits<double>::infinity();
  std::vector<KStep> visited;  ///< in visiting order (k descending)
};

/// Visits k = k_max, ..., 1 and stops the first time eta(k) > eta(k + 1).
/// Ties in the argmin keep the earlier (larger) k.
inline KSearch descend_k(std::size_t k_max, const std::function<double(std::size_t)>& eta_of) {
  KSearch out;
  for (std::size_t k = k_max; k >= 1; --k) {
    const double eta = eta_of(k);
    const bool rising = !out.visited.empty() && eta > out.visited.back().eta;
    out.visited.push_back({k, eta});
    if (eta < out.eta) {
      out.eta = eta;
      out.k_best = k;
    }
    if (rising) break;
  }
  return out;
}

/// floor(sqrt(n)) without floating-point surprises.
inline std::size_t isqrt(std::size_t n) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

struct CandidateResult {
  MeasureParams p;
  std::size_t k_best = 0;
  double eta = 1.0;
  Partition partition;
  std::vector<KStep> visited;
};

/// Fitness of one parameter vector: embeds the dataset with p, then searches
/// k from floor(sqrt(n)) downwards, scoring each k-NN partition with eta where
/// the whole-set entropy uses the (k+1)-NN graph.
inline CandidateResult evaluate_candidate(const Dataset& ds, const PrototypeSet& prototypes, const MeasureParams& p,
                                          Measure measure, const TrainerConfig& cfg) {
  const std::size_t n = ds.size();
  const std::size_t k_max = isqrt(n);
  if (n < 4 || k_max + 1 > n - 1)
    throw DataError("evaluate_candidate: need at least 4 samples, got " + std::to_string(n));

  const Matrix points = embed(ds, prototypes, p, measure);
  const NeighbourTable table(points);
  const EntropyConfig ent = make_entropy_config(cfg.alpha, points.cols());

  // Graphs are reused between consecutive k: graph(k) of one step is graph(k+1) of the next.
  std::optional<KnnGraph> upper;
  std::vector<Partition> partitions;
  const auto search = descend_k(k_max, [&](std::size_t k) {
    KnnGraph lower = table.graph(k);
    if (!upper) upper = table.graph(k + 1);
    Partition part = connected_components(lower);
    const double eta = objective_eta(alpha_jensen(*upper, lower, part, ent));
    partitions.push_back(std::move(part));
    upper = std::move(lower);
    return eta;
  });

  CandidateResult r;
  r.p = p;
  r.k_best = search.k_best;
  r.eta = search.eta;
  r.visited = search.visited;
  r.partition = std::move(partitions[k_max - search.k_best]);
  return r;
}

namespace detail {

inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t generation, std::uint64_t individual) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(generation), static_cast<std::uint32_t>(individual)};
  return std::mt19937_64(seq);
}

struct Individual {
  MeasureParams p;
  double fitness = std::numeric_limits<double>::infinity();  ///< eta; +inf for degenerate embeddings
  std::optional<CandidateResult> result;
};

/// Evaluates individuals[i] for every i in `todo`, possibly in parallel. Results
/// land at their own index, so the outcome is independent of scheduling.
inline void evaluate_all(std::vector<Individual>& pop, const std::vector<std::size_t>& todo,
                         const std::function<CandidateResult(const MeasureParams&)>& fitness, unsigned threads) {
  std::vector<std::exception_ptr> errors(pop.size());
  auto work = [&](std::size_t i) {
    try {
      auto r = fitness(pop[i].p);
      pop[i].fitness = r.eta;
      pop[i].result = std::move(r);
    } catch (const DegenerateError&) {
      pop[i].fitness = std::numeric_limits<double>::infinity();
      pop[i].result.reset();
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const unsigned workers = std::min<unsigned>(threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads,
                                              static_cast<unsigned>(todo.size()));
  if (workers <= 1) {
    for (auto i : todo) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (std::size_t j; (j = next.fetch_add(1)) < todo.size();) work(todo[j]);
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline std::size_t best_of(const std::vector<Individual>& pop) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pop.size(); ++i)
    if (pop[i].fitness < pop[best].fitness) best = i;
  return best;
}

/// Candidates count as evaluated in index order and the search ends at the
/// first one reaching tau, so that one is the best seen when the search stops.
inline std::optional<std::size_t> first_converged(const std::vector<Individual>& pop, std::size_t from, double tau) {
  for (std::size_t i = from; i < pop.size(); ++i)
    if (pop[i].fitness <= tau) return i;
  return std::nullopt;
}

}  // namespace detail

struct SearchResult {
  CandidateResult best;
  std::size_t generations = 0;
  std::vector<double> best_eta_history;
};

/// Real-coded genetic algorithm minimising eta over the measure parameters:
/// tournament selection, uniform crossover, per-gene Gaussian mutation,
/// one elite. Generation 0 holds the neutral point plus uniform samples.
inline SearchResult optimise_parameters(const MeasureParams& neutral,
                                        const std::function<CandidateResult(const MeasureParams&)>& fitness,
                                        const TrainerConfig& cfg) {
  cfg.validate();
  const std::size_t genes = neutral.size();
  std::vector<detail::Individual> pop(cfg.population);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    pop[i].p = neutral;
    if (i == 0) continue;
    auto rng = detail::stream(cfg.seed, 0, i);
    for (std::size_t g = 0; g < genes; ++g) {
      std::uniform_real_distribution<double> u(neutral.bounds[g].lo, neutral.bounds[g].hi);
      pop[i].p.values[g] = u(rng);
    }
  }
  std::vector<std::size_t> all(pop.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  detail::evaluate_all(pop, all, fitness, cfg.threads);

  SearchResult out;
  auto hit = detail::first_converged(pop, 0, cfg.tau);
  std::size_t best = hit.value_or(detail::best_of(pop));
  out.best_eta_history.push_back(pop[best].fitness);
  out.generations = 1;

  while (out.generations < cfg.max_iterations && !hit) {
    std::vector<detail::Individual> next(pop.size());
    next[0] = pop[best];
    for (std::size_t i = 1; i < next.size(); ++i) {
      auto rng = detail::stream(cfg.seed, out.generations, i);
      std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
      auto tournament = [&] {
        std::size_t w = pick(rng);
        for (std::size_t t = 1; t < cfg.tournament; ++t) {
          const std::size_t c = pick(rng);
          if (pop[c].fitness < pop[w].fitness || (pop[c].fitness == pop[w].fitness && c < w)) w = c;
        }
        return w;
      };
      const auto& a = pop[tournament()].p;
      const auto& b = pop[tournament()].p;
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      MeasureParams child = a;
      if (unit(rng) < cfg.crossover_rate)
        for (std::size_t g = 0; g < genes; ++g)
          if (unit(rng) < 0.5) child.values[g] = b.values[g];
      for (std::size_t g = 0; g < genes; ++g) {
        if (unit(rng) < cfg.mutation_rate) {
          std::normal_distribution<double> step(0.0, cfg.mutation_sigma * child.bounds[g].width());
          child.values[g] += step(rng);
        }
        child.values[g] = child.bounds[g].clamp(child.values[g]);
      }
      next[i].p = std::move(child);
    }
    std::vector<std::size_t> todo(next.size() - 1);
    for (std::size_t i = 0; i < todo.size(); ++i) todo[i] = i + 1;
    detail::evaluate_all(next, todo, fitness, cfg.threads);
    pop = std::move(next);
    hit = detail::first_converged(pop, 1, cfg.tau);  // the elite is known to be above tau
    best = hit.value_or(detail::best_of(pop));
    out.best_eta_history.push_back(pop[best].fitness);
    ++out.generations;
  }

  if (!pop[best].result) throw DegenerateError("no structure: every candidate embedding is degenerate");
  out.best = *pop[best].result;
  return out;
}

/// Fuzzy statistics of each component on the k-NN graph over the training embedding.
inline std::vector<CentralityProfile> component_profiles(const Matrix& embedded, const Partition& partition,
                                                         std::size_t k, double percentile_l) {
  const KnnGraph g = build_knn_graph(embedded, k);
  std::vector<CentralityProfile> out;
  out.reserve(partition.order());
  for (const auto& comp : partition.components) out.push_back(centrality_profile(induced_subgraph(g, comp), percentile_l));
  return out;
}

inline bool all_identical(const Dataset& ds) {
  return std::all_of(ds.samples.begin(), ds.samples.end(),
                     [&](const Sample& s) { return s.value == ds.samples.front().value; });
}

/// Full training: prototype selection, parameter search and fuzzification.
/// Datasets larger than max_train_size are reduced to a random subsample that
/// also serves as the representation set.
inline TrainedModel train(const Dataset& full, Measure measure, const TrainerConfig& cfg) {
  cfg.validate();
  if (full.empty()) throw DataError("training dataset is empty");
  if (all_identical(full)) throw DegenerateError("no structure: all training samples are identical");
  if ((measure == Measure::WeightedEuclidean) != (full.kind == SampleKind::Vector))
    throw DataError("measure " + to_string(measure) + " does not apply to this dataset");

  PrototypeSet prototypes = select_prototypes(full, cfg.max_train_size, cfg.seed);
  const Dataset ds = subset(full, prototypes.indices);
  const MeasureParams neutral = neutral_params(measure, full.dimension);

  auto fitness = [&](const MeasureParams& p) { return evaluate_candidate(ds, prototypes, p, measure, cfg); };
  SearchResult search = optimise_parameters(neutral, fitness, cfg);

  TrainedModel model;
  model.measure = measure;
  model.p_star = search.best.p;
  model.k_star = search.best.k_best;
  model.prototypes = std::move(prototypes);
  model.alphabet = full.alphabet;
  model.embedded_train = embed(ds, model.prototypes, model.p_star, measure);
  model.partition = std::move(search.best.partition);
  for (const auto& prof : component_profiles(model.embedded_train, model.partition, model.k_star, cfg.percentile_l))
    model.components.push_back(ComponentStats{prof.chi_star, prof.threshold});
  model.alpha = cfg.alpha;
  model.percentile_l = cfg.percentile_l;
  model.seed = cfg.seed;
  model.final_eta = search.best.eta;
  model.iterations = search.generations;
  model.eta_history = std::move(search.best_eta_history);
  return model;
}

}  // namespace eocc
