#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "eocc/dataset.hpp"
#include "eocc/entropic_graph.hpp"
#include "eocc/error.hpp"
#include "eocc/model.hpp"

namespace eocc {

namespace io_detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(std::string_view line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Parses a double; nullopt if the field is not a number at all.
inline std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

inline std::optional<std::size_t> parse_index(std::string_view s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

inline std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace io_detail

struct CsvOptions {
  std::optional<std::string> label_column;  ///< header name, or 0-based column index
  char delimiter = ',';
};

/// Numeric CSV, one sample per row. The first row is a header when any of its
/// feature fields is not a number. NaN/Inf values are rejected.
inline Dataset load_csv(const std::filesystem::path& path, const CsvOptions& opt = {}) {
  using namespace io_detail;
  const auto lines = read_lines(path);
  std::size_t first = 0;
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  if (first == lines.size()) throw DataError(path.string() + ": no data rows");

  const auto head = split(lines[first], opt.delimiter);
  std::optional<std::size_t> label_idx;
  if (opt.label_column) label_idx = parse_index(*opt.label_column);

  bool header = false;
  for (std::size_t c = 0; c < head.size(); ++c) {
    if (label_idx && c == *label_idx) continue;
    if (!parse_number(head[c])) header = true;
  }
  if (opt.label_column && header) {
    for (std::size_t c = 0; c < head.size(); ++c)
      if (head[c] == *opt.label_column) label_idx = c;
  }
  if (opt.label_column && !label_idx) throw DataError(path.string() + ": label column '" + *opt.label_column + "' not found");
  if (label_idx && *label_idx >= head.size()) throw DataError(path.string() + ": label column index out of range");

  std::vector<Sample> samples;
  for (std::size_t ln = first + (header ? 1 : 0); ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(ln + 1) + ": ";
    const auto fields = split(lines[ln], opt.delimiter);
    if (fields.size() != head.size())
      throw DataError(where + "expected " + std::to_string(head.size()) + " fields, found " + std::to_string(fields.size()));
    std::vector<double> v;
    std::optional<std::string> label;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (label_idx && c == *label_idx) {
        label = fields[c];
        continue;
      }
      const auto x = parse_number(fields[c]);
      if (!x) throw DataError(where + "cannot parse '" + fields[c] + "' as a number");
      if (!std::isfinite(*x)) throw DataError(where + "non-finite value '" + fields[c] + "'");
      v.push_back(*x);
    }
    samples.push_back(Sample::vector(std::move(v), std::move(label)));
  }
  if (samples.empty()) throw DataError(path.string() + ": no data rows");
  return make_dataset(std::move(samples), path.stem().string());
}

/// One sequence per line, optionally followed by a tab and a label. Blank lines are skipped.
inline Dataset load_sequences(const std::filesystem::path& path) {
  using namespace io_detail;
  std::vector<Sample> samples;
  const auto lines = read_lines(path);
  for (const auto& line : lines) {
    if (trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      samples.push_back(Sample::sequence(std::string(trim(line))));
    } else {
      samples.push_back(Sample::sequence(std::string(trim(std::string_view(line).substr(0, tab))),
                                         std::string(trim(std::string_view(line).substr(tab + 1)))));
    }
  }
  if (samples.empty()) throw DataError(path.string() + ": no sequences");
  return make_dataset(std::move(samples), path.stem().string());
}

/// Writes `content` to a temporary sibling and renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw DataError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

/// Vector dataset as CSV: header x0..x{F-1}[,label], 17 significant digits.
inline std::string dataset_to_csv(const Dataset& ds) {
  if (ds.kind != SampleKind::Vector) throw DataError("dataset_to_csv: vector datasets only");
  std::ostringstream os;
  os.precision(17);
  const bool labels = ds.labelled();
  for (std::size_t j = 0; j < ds.dimension; ++j) os << (j ? "," : "") << 'x' << j;
  os << (labels ? ",label\n" : "\n");
  for (const auto& s : ds.samples) {
    const auto& v = s.as_vector();
    for (std::size_t j = 0; j < v.size(); ++j) os << (j ? "," : "") << v[j];
    if (labels) os << ',' << *s.label;
    os << '\n';
  }
  return os.str();
}

inline std::string edge_list_text(const KnnGraph& g) {
  std::ostringstream os;
  write_edge_list(os, g);
  return os.str();
}

// ---------------------------------------------------------------------------
// Model persistence

namespace io_detail {

using nlohmann::json;

inline json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::infinity() : j.get<double>();
}

}  // namespace io_detail

inline nlohmann::json model_to_json(const TrainedModel& m) {
  using io_detail::json;
  json j;
  j["format"] = "eocc-model";
  j["format_version"] = m.format_version;
  j["measure"] = to_string(m.measure);
  j["p_star"] = m.p_star.values;
  json bounds = json::array();
  for (const auto& b : m.p_star.bounds) bounds.push_back({b.lo, b.hi});
  j["p_bounds"] = bounds;
  j["k_star"] = m.k_star;
  j["alpha"] = m.alpha;
  j["gamma"] = m.gamma();
  j["percentile_l"] = m.percentile_l;

  json protos;
  protos["indices"] = m.prototypes.indices;
  json samples = json::array();
  json labels = json::array();
  for (const auto& s : m.prototypes.samples) {
    if (s.kind() == SampleKind::Vector)
      samples.push_back(s.as_vector());
    else
      samples.push_back(s.as_sequence());
    labels.push_back(s.label ? json(*s.label) : json(nullptr));
  }
  protos["kind"] = m.prototypes.samples.empty() || m.prototypes.samples.front().kind() == SampleKind::Vector
                       ? "vector"
                       : "sequence";
  protos["samples"] = samples;
  protos["labels"] = labels;
  j["prototypes"] = protos;
  j["alphabet"] = m.alphabet;

  json rows = json::array();
  for (std::size_t r = 0; r < m.embedded_train.rows(); ++r) {
    auto row = m.embedded_train.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["embedded_train"] = {{"rows", m.embedded_train.rows()}, {"cols", m.embedded_train.cols()}, {"data", rows}};

  json comps = json::array();
  for (std::size_t c = 0; c < m.partition.order(); ++c) {
    comps.push_back({{"vertices", m.partition.components[c]},
                     {"chi_star", m.components.at(c).chi_star},
                     {"threshold", m.components.at(c).threshold}});
  }
  j["components"] = comps;

  json hist = json::array();
  for (double e : m.eta_history) hist.push_back(io_detail::number(e));
  j["training"] = {{"seed", m.seed},
                   {"final_eta", io_detail::number(m.final_eta)},
                   {"iterations", m.iterations},
                   {"eta_history", hist}};
  return j;
}

inline std::string model_to_string(const TrainedModel& m) { return model_to_json(m).dump(1) + "\n"; }

inline TrainedModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "eocc-model") throw DataError("not an eocc model document");
    TrainedModel m;
    m.format_version = j.at("format_version").get<int>();
    if (m.format_version != kModelFormatVersion)
      throw DataError("unsupported model format version " + std::to_string(m.format_version));
    m.measure = measure_from_string(j.at("measure").get<std::string>());
    m.p_star.values = j.at("p_star").get<std::vector<double>>();
    for (const auto& b : j.at("p_bounds")) m.p_star.bounds.push_back(Interval{b.at(0).get<double>(), b.at(1).get<double>()});
    if (m.p_star.values.size() != m.p_star.bounds.size()) throw DataError("p_star and p_bounds differ in length");
    m.k_star = j.at("k_star").get<std::size_t>();
    m.alpha = j.at("alpha").get<double>();
    m.percentile_l = j.at("percentile_l").get<double>();

    const auto& protos = j.at("prototypes");
    m.prototypes.indices = protos.at("indices").get<std::vector<std::size_t>>();
    const bool vec = protos.at("kind").get<std::string>() == "vector";
    const auto& labels = protos.at("labels");
    const auto& samples = protos.at("samples");
    if (labels.size() != samples.size()) throw DataError("prototype labels and samples differ in length");
    for (std::size_t i = 0; i < samples.size(); ++i) {
      std::optional<std::string> label;
      if (!labels[i].is_null()) label = labels[i].get<std::string>();
      m.prototypes.samples.push_back(vec ? Sample::vector(samples[i].get<std::vector<double>>(), label)
                                         : Sample::sequence(samples[i].get<std::string>(), label));
    }
    m.alphabet = j.at("alphabet").get<std::string>();

    const auto& emb = j.at("embedded_train");
    const auto rows = emb.at("rows").get<std::size_t>();
    const auto cols = emb.at("cols").get<std::size_t>();
    const auto& data = emb.at("data");
    if (data.size() != rows) throw DataError("embedded_train row count mismatch");
    if (cols != m.prototypes.size()) throw DataError("embedded_train column count differs from prototype count");
    m.embedded_train = Matrix(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      if (data[r].size() != cols) throw DataError("embedded_train row " + std::to_string(r) + " has wrong length");
      for (std::size_t c = 0; c < cols; ++c) m.embedded_train(r, c) = data[r][c].get<double>();
    }

    m.partition.component_of.assign(rows, rows);
    for (const auto& comp : j.at("components")) {
      auto verts = comp.at("vertices").get<std::vector<std::size_t>>();
      if (verts.empty()) throw DataError("empty component in model");
      for (auto v : verts) {
        if (v >= rows || m.partition.component_of[v] != rows) throw DataError("invalid component membership");
        m.partition.component_of[v] = m.partition.components.size();
      }
      m.partition.components.push_back(std::move(verts));
      m.components.push_back(ComponentStats{comp.at("chi_star").get<double>(), comp.at("threshold").get<double>()});
      if (m.components.back().threshold < 0.0) throw DataError("negative centrality threshold");
    }
    for (auto c : m.partition.component_of)
      if (c == rows) throw DataError("components do not cover every training vertex");

    const auto& tr = j.at("training");
    m.seed = tr.at("seed").get<std::uint64_t>();
    m.final_eta = io_detail::number_from(tr.at("final_eta"));
    m.iterations = tr.at("iterations").get<std::size_t>();
    for (const auto& e : tr.at("eta_history")) m.eta_history.push_back(io_detail::number_from(e));
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model document: ") + e.what());
  }
}

inline void save_model(const TrainedModel& m, const std::filesystem::path& path) {
  write_file_atomic(path, model_to_string(m));
}

inline TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model " + path.string());
  try {
    return model_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace eocc
