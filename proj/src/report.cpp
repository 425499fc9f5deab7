#include "treedist/report.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>

#include <json.hpp>

#include "treedist/compare.hpp"
#include "treedist/error.hpp"
#include "treedist/geodesic.hpp"
#include "treedist/parallel.hpp"
#include "treedist/quartet_triplet.hpp"
#include "treedist/rf.hpp"
#include "treedist/spr.hpp"

namespace treedist {

namespace {

struct Entry {
  Metric metric;
  std::string_view name;
};

constexpr Entry kMetrics[] = {
    {Metric::Rf, "rf"},
    {Metric::Rfl, "rfl"},
    {Metric::Quartet, "quartet"},
    {Metric::Triplet, "triplet"},
    {Metric::TripletLength, "triplet-length"},
    {Metric::Geodesic, "geodesic"},
    {Metric::Mast, "mast"},
    {Metric::Align, "align"},
    {Metric::Ccc, "ccc"},
    {Metric::Node, "node"},
    {Metric::PathDiff, "path-diff"},
    {Metric::Sim, "sim"},
    {Metric::Spr, "spr"},
};

bool needs_rooted(Metric m) {
  switch (m) {
    case Metric::Triplet:
    case Metric::TripletLength:
    case Metric::Mast:
    case Metric::Ccc:
    case Metric::Sim:
    case Metric::Spr:
      return true;
    default:
      return false;
  }
}

bool needs_weights(Metric m) {
  return m == Metric::Rfl || m == Metric::TripletLength || m == Metric::Sim;
}

std::string format_value(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

}  // namespace

std::string_view metric_name(Metric m) {
  for (const auto& e : kMetrics)
    if (e.metric == m) return e.name;
  return "?";
}

std::optional<Metric> metric_from_name(std::string_view name) {
  for (const auto& e : kMetrics)
    if (e.name == name) return e.metric;
  return std::nullopt;
}

const std::vector<Metric>& all_metrics() {
  static const std::vector<Metric> all = [] {
    std::vector<Metric> out;
    for (const auto& e : kMetrics) out.push_back(e.metric);
    return out;
  }();
  return all;
}

void check_inputs(Metric m, std::span<const Tree> trees, std::span<const std::string> labels) {
  const std::string metric(metric_name(m));
  for (std::size_t i = 0; i < trees.size(); ++i) {
    const Tree& t = trees[i];
    const std::string who = "tree " + labels[i] + ": ";
    if (needs_rooted(m) && !t.rooted())
      fail(ErrorCode::UnrootedInput, who + metric + " needs rooted trees");
    if (needs_weights(m) && !t.weighted())
      fail(ErrorCode::UnweightedInput, who + metric + " needs edge weights");
    if (i > 0 && t.leaf_labels() != trees[0].leaf_labels())
      fail(ErrorCode::LabelSetMismatch, who + "label set differs from tree " + labels[0]);
    if (m == Metric::Geodesic && i > 0 && t.rooted() != trees[0].rooted())
      fail(ErrorCode::RootednessMismatch, who + "rootedness differs from tree " + labels[0]);
    if (m == Metric::Spr) {
      const RootedView view = hang_at_root(t);
      for (VertexId v : view.preorder)
        if (!view.is_leaf(v) && view.children[v].size() != 2)
          fail(ErrorCode::NotBinary, who + "spr needs binary trees");
    }
  }
}

double pair_value(Metric m, const Tree& a, const Tree& b, const MetricOptions& options,
                  std::string* note) {
  switch (m) {
    case Metric::Rf:
      return static_cast<double>(rf_distance(a, b));
    case Metric::Rfl:
      if (options.raw) {
        try {
          return rfl_distance(a, b, true).value;
        } catch (const AmbiguousMatchingError& e) {
          if (note) {
            *note = "ambiguous matching (" + std::to_string(e.matching_count()) + " matchings): {";
            for (std::size_t k = 0; k < e.candidates().size(); ++k)
              *note += (k ? ";" : "") + format_value(e.candidates()[k]);
            *note += "}";
          }
          return std::numeric_limits<double>::quiet_NaN();
        }
      }
      return rfl_distance(a, b).value;
    case Metric::Quartet:
      return static_cast<double>(quartet_distance(suppress_unary(a, false), suppress_unary(b, false)));
    case Metric::Triplet:
      return static_cast<double>(triplet_distance(a, b));
    case Metric::TripletLength:
      return triplet_length_distance(a, b);
    case Metric::Geodesic: {
      const GeodesicResult r = geodesic_distance(a, b, {options.include_pendants});
      if (note && r.iterations > 0) *note = "refinements: " + std::to_string(r.iterations);
      return r.length;
    }
    case Metric::Mast:
      return static_cast<double>(mast_distance(a, b).distance);
    case Metric::Align:
      return align_score(a, b).total;
    case Metric::Ccc:
      return ccc(a, b);
    case Metric::Node:
      return node_distance(a, b, 1);
    case Metric::PathDiff:
      return node_distance(a, b, 2);
    case Metric::Sim:
      return similarity_probability_distance(a, b);
    case Metric::Spr:
      return static_cast<double>(spr_distance_maf(a, b).distance);
  }
  fail(ErrorCode::DomainError, "unknown metric");
}

MatrixReport compute_matrix(Metric m, std::span<const Tree> trees,
                            std::span<const std::string> labels, const MetricOptions& options,
                            bool parallel) {
  if (labels.size() != trees.size()) fail(ErrorCode::DomainError, "one identifier per tree");
  check_inputs(m, trees, labels);
  const std::size_t n = trees.size();
  MatrixReport r;
  r.metric = std::string(metric_name(m));
  r.labels.assign(labels.begin(), labels.end());
  r.symmetric = !(m == Metric::Rfl && options.raw);
  r.values.assign(n, std::vector<double>(n, std::numeric_limits<double>::quiet_NaN()));

  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = r.symmetric ? i : 0; j < n; ++j) cells.emplace_back(i, j);
  std::vector<double> value(cells.size());
  std::vector<std::string> notes(cells.size());
  std::vector<std::exception_ptr> errors(cells.size());
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(cells.size());

#pragma omp parallel for if (parallel) num_threads(worker_count()) schedule(dynamic)
  for (std::ptrdiff_t c = 0; c < count; ++c) {
    try {
      const auto [i, j] = cells[c];
      value[c] = pair_value(m, trees[i], trees[j], options, &notes[c]);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  }

  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto [i, j] = cells[c];
    if (errors[c]) {
      try {
        std::rethrow_exception(errors[c]);
      } catch (const Error& e) {
        throw Error(e.code(), "trees " + labels[i] + " and " + labels[j] + ": " + e.what());
      }
    }
    r.values[i][j] = value[c];
    if (r.symmetric) r.values[j][i] = value[c];
    if (!notes[c].empty()) r.diagnostics.push_back({i, j, std::move(notes[c])});
  }
  return r;
}

std::string to_csv(const MatrixReport& report) {
  std::string out;
  for (const auto& l : report.labels) out += "," + l;
  out += "\n";
  for (std::size_t i = 0; i < report.labels.size(); ++i) {
    out += report.labels[i];
    for (double x : report.values[i]) out += "," + format_value(x);
    out += "\n";
  }
  return out;
}

std::string to_json(const MatrixReport& report) {
  nlohmann::ordered_json j;
  j["metric"] = report.metric;
  j["labels"] = report.labels;
  nlohmann::ordered_json matrix = nlohmann::ordered_json::array();
  for (const auto& row : report.values) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (double x : row) {
      if (std::isnan(x)) {
        r.push_back(nullptr);
      } else {
        r.push_back(x);
      }
    }
    matrix.push_back(std::move(r));
  }
  j["matrix"] = std::move(matrix);
  nlohmann::ordered_json diags = nlohmann::ordered_json::array();
  for (const auto& d : report.diagnostics)
    diags.push_back({{"i", d.i}, {"j", d.j}, {"note", d.note}});
  j["diagnostics"] = std::move(diags);
  return j.dump(2) + "\n";
}

}  // namespace treedist
