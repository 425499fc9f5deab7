// treedist: pairwise tree distances, random trees, validation, timing.
//
// Exit codes: 0 success, 1 usage or IO failure, 2 library error (printed as
// "error[Code]: message"), 3 when `bench` finds rf scaling above the bound.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "treedist/error.hpp"
#include "treedist/newick.hpp"
#include "treedist/random_tree.hpp"
#include "treedist/report.hpp"
#include "treedist/rf.hpp"
#include "treedist/tree.hpp"

namespace {

using namespace treedist;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TreeFile {
  std::vector<Tree> trees;
  std::vector<std::string> ids;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parse errors gain the file name (they carry line and column already);
// ids are basename#index.
TreeFile load(const std::string& path) {
  const std::string text = slurp(path);
  NewickDocument doc;
  try {
    doc = parse(text);
  } catch (const ParseError& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
  for (const auto& w : doc.warnings) std::cerr << "warning: " << path << ": " << w << "\n";
  TreeFile out;
  const std::string base = std::filesystem::path(path).filename().string();
  for (std::size_t i = 0; i < doc.trees.size(); ++i) {
    out.trees.push_back(std::move(doc.trees[i]));
    out.ids.push_back(base + "#" + std::to_string(i));
  }
  return out;
}

TreeFile load_all(const std::vector<std::string>& paths) {
  TreeFile all;
  for (const auto& p : paths) {
    TreeFile f = load(p);
    std::move(f.trees.begin(), f.trees.end(), std::back_inserter(all.trees));
    std::move(f.ids.begin(), f.ids.end(), std::back_inserter(all.ids));
  }
  return all;
}

Metric parse_metric(const std::string& name) {
  const auto m = metric_from_name(name);
  if (!m) fail(ErrorCode::DomainError, "unknown metric '" + name + "'");
  return *m;
}

struct DistArgs {
  std::string metric;
  bool raw = false;
  std::string format = "csv";
  bool no_pendant = false;
  std::vector<std::string> files;
};

int cmd_dist(const DistArgs& a) {
  const Metric m = parse_metric(a.metric);
  const TreeFile in = load_all(a.files);
  const MatrixReport r = compute_matrix(m, in.trees, in.ids, {a.raw, !a.no_pendant});
  std::cout << (a.format == "json" ? to_json(r) : to_csv(r));
  return 0;
}

struct RandomArgs {
  int n = 0;
  int count = 1;
  std::uint64_t seed = 0;
  bool weighted = false;
  bool rooted = false;
};

int cmd_random(const RandomArgs& a) {
  if (a.n < 2) fail(ErrorCode::DomainError, "n must be at least 2");
  if (a.count < 0) fail(ErrorCode::DomainError, "count must be non-negative");
  std::mt19937_64 rng(a.seed);
  for (int i = 0; i < a.count; ++i)
    std::cout << serialize(random_binary_tree(a.n, rng, a.rooted, a.weighted), kExactWeights) << "\n";
  return 0;
}

int cmd_validate(const std::vector<std::string>& files) {
  bool clean = true;
  for (const auto& path : files) {
    const TreeFile f = load(path);
    for (std::size_t i = 0; i < f.trees.size(); ++i) {
      const auto problems = validate(f.trees[i]);
      std::cout << f.ids[i] << ": "
                << (problems.empty() ? "ok" : std::to_string(problems.size()) + " problem(s)")
                << " (" << f.trees[i].leaf_labels().size() << " leaves, "
                << (f.trees[i].rooted() ? "rooted" : "unrooted") << ")\n";
      for (const auto& p : problems)
        std::cout << "  " << violation_name(p.kind) << ": " << p.detail << "\n";
      clean = clean && problems.empty();
    }
  }
  return clean ? 0 : 2;
}

int cmd_consensus(const std::string& file) {
  const TreeFile f = load(file);
  if (f.trees.empty()) fail(ErrorCode::EmptyInput, file + ": no trees");
  std::cout << serialize(strict_consensus(f.trees)) << "\n";
  return 0;
}

struct BenchArgs {
  std::string metric;
  std::vector<int> sizes;
  int repetitions = 5;
  std::uint64_t seed = 0;
};

int cmd_bench(const BenchArgs& a) {
  const Metric m = parse_metric(a.metric);
  std::mt19937_64 rng(a.seed);
  // Rooted weighted binary trees meet every metric's input requirements.
  std::vector<std::pair<Tree, Tree>> pairs;
  for (int n : a.sizes) {
    Tree x = random_binary_tree(n, rng, true, true);
    pairs.emplace_back(std::move(x), random_binary_tree(n, rng, true, true));
  }
  const auto batch_time = [&](std::size_t s, int calls) {
    const auto start = std::chrono::steady_clock::now();
    for (int k = 0; k < calls; ++k) {
      volatile double sink = pair_value(m, pairs[s].first, pairs[s].second, {});
      (void)sink;
    }
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  // Each timing covers a batch of calls (about 20 ms) to keep timer noise
  // small, and sizes are interleaved within every repetition so that drift
  // in machine load affects all sizes alike.
  std::vector<int> calls;
  for (std::size_t s = 0; s < pairs.size(); ++s)
    calls.push_back(std::clamp(static_cast<int>(0.02 / std::max(batch_time(s, 1), 1e-9)), 1, 1000));
  std::vector<std::vector<double>> times(pairs.size());
  for (int r = 0; r < std::max(1, a.repetitions); ++r)
    for (std::size_t s = 0; s < pairs.size(); ++s)
      times[s].push_back(batch_time(s, calls[s]) / calls[s]);
  std::vector<double> medians;
  std::printf("metric,n,median_seconds\n");
  for (std::size_t s = 0; s < pairs.size(); ++s) {
    std::sort(times[s].begin(), times[s].end());
    medians.push_back(times[s][times[s].size() / 2]);
    std::printf("%s,%d,%.6g\n", a.metric.c_str(), a.sizes[s], medians.back());
  }
  if (m != Metric::Rf) return 0;
  // Near-linear scaling: doubling n at n >= 1e4 costs at most 2.5x.
  bool ok = true;
  for (std::size_t i = 0; i < a.sizes.size(); ++i)
    for (std::size_t j = 0; j < a.sizes.size(); ++j)
      if (a.sizes[i] >= 10000 && a.sizes[j] == 2 * a.sizes[i]) {
        const double ratio = medians[j] / std::max(medians[i], 1e-9);
        std::printf("ratio %d->%d: %.3f %s\n", a.sizes[i], a.sizes[j], ratio,
                    ratio <= 2.5 ? "ok" : "above 2.5");
        ok = ok && ratio <= 2.5;
      }
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phylogenetic tree comparison"};
  app.require_subcommand(1);

  DistArgs dist;
  auto* d = app.add_subcommand("dist", "All-pairs distance matrix over the trees in FILE...");
  d->add_option("--metric", dist.metric, "rf, rfl, quartet, triplet, triplet-length, geodesic, "
                                         "mast, align, ccc, node, path-diff, sim, spr")
      ->required();
  d->add_flag("--raw", dist.raw, "rfl: compare trees as given and flag ambiguous matchings");
  d->add_option("--format", dist.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  d->add_flag("--no-pendant", dist.no_pendant, "geodesic: ignore pendant edge lengths");
  d->add_option("files", dist.files)->required();

  RandomArgs rnd;
  auto* r = app.add_subcommand("random", "Seeded random binary trees in Newick");
  r->add_option("--n", rnd.n, "leaf count")->required();
  r->add_option("--count", rnd.count, "number of trees");
  r->add_option("--seed", rnd.seed, "generator seed");
  r->add_flag("--weighted", rnd.weighted, "edge weights uniform in (0,1]");
  r->add_flag("--rooted", rnd.rooted, "rooted trees");

  std::vector<std::string> validate_files;
  auto* v = app.add_subcommand("validate", "Parse and check every tree");
  v->add_option("files", validate_files)->required();

  BenchArgs bench;
  auto* b = app.add_subcommand("bench", "Median wall time per call, one pair per size");
  b->add_option("--metric", bench.metric)->required();
  b->add_option("--sizes", bench.sizes)->required()->delimiter(',');
  b->add_option("--repetitions", bench.repetitions);
  b->add_option("--seed", bench.seed);

  std::string consensus_file;
  auto* c = app.add_subcommand("consensus", "Strict consensus of all trees in FILE");
  c->add_option("file", consensus_file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*d) return cmd_dist(dist);
    if (*r) return cmd_random(rnd);
    if (*v) return cmd_validate(validate_files);
    if (*b) return cmd_bench(bench);
    if (*c) return cmd_consensus(consensus_file);
  } catch (const IoError& e) {
    std::cerr << "error[Io]: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error[" << error_code_name(e.code()) << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error[Internal]: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
