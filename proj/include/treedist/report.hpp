#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "treedist/tree.hpp"

namespace treedist {

enum class Metric {
  Rf,
  Rfl,
  Quartet,
  Triplet,
  TripletLength,
  Geodesic,
  Mast,
  Align,
  Ccc,
  Node,
  PathDiff,
  Sim,
  Spr,
};

std::string_view metric_name(Metric m);
std::optional<Metric> metric_from_name(std::string_view name);
const std::vector<Metric>& all_metrics();

struct MetricOptions {
  bool raw = false;               // rfl: keep trees as given, flag ambiguity
  bool include_pendants = true;   // geodesic
};

struct PairNote {
  std::size_t i = 0;
  std::size_t j = 0;
  std::string note;
};

struct MatrixReport {
  std::string metric;
  std::vector<std::string> labels;          // tree identifiers
  std::vector<std::vector<double>> values;  // NaN where a cell has no value
  std::vector<PairNote> diagnostics;        // sorted by (i, j)
  bool symmetric = true;
};

// Per-tree requirements of `m` (rootedness, weights, binary shape). Throws
// the module's error code with the offending identifier in the message.
void check_inputs(Metric m, std::span<const Tree> trees, std::span<const std::string> labels);

// Value of one ordered pair. `note` receives diagnostics such as refinement
// counts or the candidate values of an ambiguous raw RFL matching, in which
// case the value is NaN.
double pair_value(Metric m, const Tree& a, const Tree& b, const MetricOptions& options,
                  std::string* note = nullptr);

// All pairs. Symmetric metrics compute i <= j and mirror, so the matrix is
// symmetric bit for bit; raw RFL computes every ordered pair. Cells are
// spread over OpenMP workers when `parallel`; the first failing cell in
// row-major order is rethrown with both identifiers in the message.
MatrixReport compute_matrix(Metric m, std::span<const Tree> trees,
                            std::span<const std::string> labels, const MetricOptions& options,
                            bool parallel = true);

// Header row ",id..." then one row per tree; 15 significant digits.
std::string to_csv(const MatrixReport& report);
// {metric, labels, matrix, diagnostics}; NaN cells become null.
std::string to_json(const MatrixReport& report);

}  // namespace treedist
