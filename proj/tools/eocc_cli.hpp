#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "eocc/eocc.hpp"

namespace eocc::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kNumeric = 4 };

struct InputFlags {
  std::string path;
  std::string format = "csv";
  std::string label_col;
};

inline void add_input_flags(CLI::App* cmd, InputFlags& f) {
  cmd->add_option("--input", f.path, "dataset file")->required();
  cmd->add_option("--format", f.format, "csv or seq")->check(CLI::IsMember({"csv", "seq"}));
  cmd->add_option("--label-col", f.label_col, "label column (header name or 0-based index), csv only");
}

inline Dataset load_input(const InputFlags& f) {
  if (f.format == "seq") return load_sequences(f.path);
  CsvOptions opt;
  if (!f.label_col.empty()) opt.label_column = f.label_col;
  return load_csv(f.path, opt);
}

inline void add_trainer_flags(CLI::App* cmd, TrainerConfig& cfg) {
  cmd->add_option("--tau", cfg.tau, "objective threshold for early convergence")->check(CLI::NonNegativeNumber);
  cmd->add_option("--percentile", cfg.percentile_l, "percentile l of centrality differences")->check(CLI::Range(0.0, 100.0));
  cmd->add_option("--alpha", cfg.alpha, "Renyi order alpha in (0,1)")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--seed", cfg.seed, "random seed");
  cmd->add_option("--max-iterations", cfg.max_iterations, "GA generations");
  cmd->add_option("--population", cfg.population, "GA population size");
  cmd->add_option("--max-train-size", cfg.max_train_size, "sub-sampling threshold");
  cmd->add_option("--threads", cfg.threads, "fitness worker threads (0 = all cores)");
}

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

inline Dataset nominal_only(const Dataset& ds, const std::string& nominal) {
  if (!ds.labelled()) throw DataError("--nominal requires a labelled dataset");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (*ds[i].label == nominal) keep.push_back(i);
  if (keep.empty()) throw DataError("nominal label '" + nominal + "' not present in dataset");
  return subset(ds, keep);
}

/// sample_index,membership,accepted,component_j,mu_0,...
inline std::string scores_csv(const TrainedModel& model, const Dataset& ds) {
  std::ostringstream os;
  os << "sample_index,membership,accepted,component_j";
  for (std::size_t c = 0; c < model.order(); ++c) os << ",mu_" << c;
  os << '\n';
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Decision d = score_sample(model, ds[i]);
    os << i << ',' << fmt(d.membership) << ',' << (d.accepted ? 1 : 0) << ',' << d.component;
    for (double mu : d.memberships) os << ',' << fmt(mu);
    os << '\n';
  }
  return os.str();
}

inline std::string eval_report_csv(const EvalReport& rep) {
  std::ostringstream os;
  os << "# " << rep.protocol << '\n';
  os << "# nominal=" << rep.nominal_label << " n_train=" << rep.n_train << " n_nominal_test=" << rep.n_nominal_test
     << " n_outlier_test=" << rep.n_outlier_test << '\n';
  os << "# mean_auc=" << fmt(rep.mean_auc) << " stddev_auc=" << fmt(rep.stddev_auc) << '\n';
  os << "run,seed,auc,order,k_star,final_eta\n";
  for (std::size_t r = 0; r < rep.runs.size(); ++r) {
    const auto& run = rep.runs[r];
    os << r << ',' << run.seed << ',' << fmt(run.auc) << ',' << run.order << ',' << run.k_star << ','
       << fmt(run.final_eta) << '\n';
  }
  return os.str();
}

/// Gaussian kernel density of `xs` on a regular grid (Silverman bandwidth).
inline std::string density_csv(const std::vector<double>& xs, std::size_t grid = 128) {
  std::ostringstream os;
  os << "difference,density\n";
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x / n;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean) / std::max(1.0, n - 1.0);
  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  const double spread = std::max(std::sqrt(var), (*hi_it - *lo_it) / 4.0);
  if (!(spread > 0.0)) {
    os << fmt(*lo_it) << ",inf\n";  // all mass at one point
    return os.str();
  }
  const double h = 1.06 * spread * std::pow(n, -0.2);
  const double lo = *lo_it - 3.0 * h, hi = *hi_it + 3.0 * h;
  for (std::size_t g = 0; g < grid; ++g) {
    const double x = lo + (hi - lo) * static_cast<double>(g) / static_cast<double>(grid - 1);
    double acc = 0.0;
    for (double v : xs) acc += std::exp(-0.5 * ((x - v) / h) * ((x - v) / h));
    os << fmt(x) << ',' << fmt(acc / (n * h * std::sqrt(2.0 * std::numbers::pi))) << '\n';
  }
  return os.str();
}

/// summary.csv plus, per component, the vertex centrality table and the density of the differences.
inline void write_report(const TrainedModel& model, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto profiles = component_profiles(model.embedded_train, model.partition, model.k_star, model.percentile_l);
  std::ostringstream summary;
  summary << "component,size,chi_star,threshold\n";
  for (std::size_t c = 0; c < profiles.size(); ++c) {
    const auto& prof = profiles[c];
    summary << c << ',' << model.partition.components[c].size() << ',' << fmt(model.components[c].chi_star) << ','
            << fmt(model.components[c].threshold) << '\n';
    std::ostringstream table;
    table << "vertex,prototype_index,closeness,difference,membership\n";
    for (std::size_t i = 0; i < prof.closeness.size(); ++i) {
      const auto v = model.partition.components[c][i];
      table << v << ',' << model.prototypes.indices[v] << ',' << fmt(prof.closeness[i]) << ','
            << fmt(prof.differences[i]) << ',' << fmt(membership_degree(prof.differences[i], prof.threshold)) << '\n';
    }
    write_file_atomic(dir / ("component_" + std::to_string(c) + ".csv"), table.str());
    write_file_atomic(dir / ("component_" + std::to_string(c) + "_density.csv"), density_csv(prof.differences));
  }
  write_file_atomic(dir / "summary.csv", summary.str());
}

/// Runs the command line; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"One-class classification with entropic spanning graphs"};
  app.require_subcommand(1);

  TrainerConfig cfg;
  InputFlags in;
  std::string nominal, model_path, out_path, measure_name, dump_graph;

  auto* train_cmd = app.add_subcommand("train", "train a model on the nominal samples");
  add_input_flags(train_cmd, in);
  add_trainer_flags(train_cmd, cfg);
  train_cmd->add_option("--nominal", nominal, "train only on samples with this label");
  train_cmd->add_option("--measure", measure_name, "weighted_euclidean or weighted_edit")
      ->check(CLI::IsMember({"weighted_euclidean", "weighted_edit"}));
  train_cmd->add_option("--dump-graph", dump_graph, "write the trained kNN graph as an edge list");
  train_cmd->add_option("--out", out_path, "model file")->required();

  auto* score_cmd = app.add_subcommand("score", "score samples with a trained model");
  score_cmd->add_option("--model", model_path, "model file")->required();
  add_input_flags(score_cmd, in);
  score_cmd->add_option("--out", out_path, "scores CSV")->required();

  std::size_t repeats = 10;
  double split = 0.5;
  auto* eval_cmd = app.add_subcommand("eval", "repeated one-class AUC evaluation");
  add_input_flags(eval_cmd, in);
  add_trainer_flags(eval_cmd, cfg);
  eval_cmd->add_option("--nominal", nominal, "nominal class label")->required();
  eval_cmd->add_option("--repeats", repeats, "number of seeded repeats")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--split", split, "nominal training fraction")->check(CLI::Range(0.0, 1.0));
  eval_cmd->add_option("--measure", measure_name, "weighted_euclidean or weighted_edit")
      ->check(CLI::IsMember({"weighted_euclidean", "weighted_edit"}));
  eval_cmd->add_option("--out", out_path, "report CSV")->required();

  std::string generator;
  SyntheticSpec spec;
  std::optional<std::size_t> synth_n, synth_dim;
  auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic dataset");
  synth_cmd->add_option("--generator", generator, "gaussians3, uniform, crescent_full_moon or highdim2")->required();
  synth_cmd->add_option("--n", synth_n, "number of samples");
  synth_cmd->add_option("--dim", synth_dim, "dimension (highdim2)");
  synth_cmd->add_option("--seed", spec.seed, "random seed");
  synth_cmd->add_option("--out", out_path, "CSV file")->required();

  auto* report_cmd = app.add_subcommand("report", "centrality-difference distributions per component");
  report_cmd->add_option("--model", model_path, "model file")->required();
  report_cmd->add_option("--out", out_path, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*train_cmd) {
      Dataset ds = load_input(in);
      if (!nominal.empty()) ds = nominal_only(ds, nominal);
      const Measure measure = measure_name.empty() ? default_measure(ds.kind) : measure_from_string(measure_name);
      const TrainedModel model = train(ds, measure, cfg);
      save_model(model, out_path);
      if (!dump_graph.empty()) write_file_atomic(dump_graph, edge_list_text(build_knn_graph(model.embedded_train, model.k_star)));
      out << "trained: d=" << model.order() << " k*=" << model.k_star << " eta=" << fmt(model.final_eta)
          << " generations=" << model.iterations << '\n';
    } else if (*score_cmd) {
      const TrainedModel model = load_model(model_path);
      write_file_atomic(out_path, scores_csv(model, load_input(in)));
    } else if (*eval_cmd) {
      const Dataset ds = load_input(in);
      const Measure measure = measure_name.empty() ? default_measure(ds.kind) : measure_from_string(measure_name);
      const EvalReport rep = run_experiment(ds, nominal, split, repeats, cfg, measure);
      write_file_atomic(out_path, eval_report_csv(rep));
      out << rep.protocol << '\n' << "mean AUC " << fmt(rep.mean_auc) << " (sd " << fmt(rep.stddev_auc) << ")\n";
    } else if (*synth_cmd) {
      spec.generator = generator_from_string(generator);
      const SyntheticSpec defaults = default_spec(spec.generator, spec.seed);
      spec.n = synth_n.value_or(defaults.n);
      spec.dim = synth_dim.value_or(defaults.dim);
      write_file_atomic(out_path, dataset_to_csv(generate_synthetic(spec)));
    } else if (*report_cmd) {
      write_report(load_model(model_path), out_path);
    }
  } catch (const DegenerateError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  }
  return kOk;
}

}  // namespace eocc::cli
