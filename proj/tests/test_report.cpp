#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include <json.hpp>

#include "support.hpp"
#include "treedist/error.hpp"
#include "treedist/random_tree.hpp"
#include "treedist/report.hpp"

namespace treedist {
namespace {

using testing::rooted;
using testing::unrooted;

std::vector<std::string> ids(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("t" + std::to_string(i));
  return out;
}

// ((1,2),3,4) with the internal edge optionally subdivided into w1 + w2.
Tree subdivided(bool subdivide, double w1, double w2 = 0.0) {
  Tree t;
  const auto x = t.add_vertex(), y = t.add_vertex();
  t.add_edge(x, t.add_vertex("3"), 1.0);
  t.add_edge(x, t.add_vertex("4"), 1.0);
  t.add_edge(y, t.add_vertex("1"), 1.0);
  t.add_edge(y, t.add_vertex("2"), 1.0);
  if (subdivide) {
    const auto m = t.add_vertex();
    t.add_edge(x, m, w1);
    t.add_edge(m, y, w2);
  } else {
    t.add_edge(x, y, w1);
  }
  t.set_weighted(true);
  return t;
}

TEST(Report, MetricNames) {
  EXPECT_EQ(all_metrics().size(), 13u);
  for (Metric m : all_metrics()) EXPECT_EQ(metric_from_name(metric_name(m)), m);
  EXPECT_FALSE(metric_from_name("hamming").has_value());
}

TEST(Report, IdenticalTrees) {
  const std::vector<Tree> trees{rooted("((1,2),(3,4));"), rooted("((1,2),(3,4));")};
  const MatrixReport r = compute_matrix(Metric::Rf, trees, ids(2), {});
  EXPECT_EQ(r.values, (std::vector<std::vector<double>>{{0, 0}, {0, 0}}));
  EXPECT_EQ(to_csv(r), ",t0,t1\nt0,0,0\nt1,0,0\n");
}

TEST(Report, EveryMetricIsSymmetricAndDeterministic) {
  std::mt19937_64 rng(10);
  std::vector<Tree> trees;
  for (int i = 0; i < 4; ++i) trees.push_back(random_binary_tree(7, rng, true, true));
  for (Metric m : all_metrics()) {
    const MatrixReport par = compute_matrix(m, trees, ids(4), {});
    const MatrixReport ser = compute_matrix(m, trees, ids(4), {}, false);
    ASSERT_EQ(par.values.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        EXPECT_EQ(std::memcmp(&par.values[i][j], &ser.values[i][j], sizeof(double)), 0);
        EXPECT_EQ(std::memcmp(&par.values[i][j], &par.values[j][i], sizeof(double)), 0)
            << metric_name(m);
      }
    EXPECT_EQ(to_json(par), to_json(ser));
  }
}

TEST(Report, GeodesicThreeTrees) {
  std::mt19937_64 rng(2);
  std::vector<Tree> trees;
  for (int i = 0; i < 3; ++i) trees.push_back(random_binary_tree(8, rng, false, true));
  const MatrixReport r = compute_matrix(Metric::Geodesic, trees, ids(3), {});
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(r.values[i][i], 0.0);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(r.values[i][j], r.values[j][i]);
  }
}

TEST(Report, CsvAndJsonAgree) {
  std::mt19937_64 rng(5);
  std::vector<Tree> trees;
  for (int i = 0; i < 5; ++i) trees.push_back(random_binary_tree(9, rng, false, true));
  const MatrixReport r = compute_matrix(Metric::Geodesic, trees, ids(5), {});
  const auto j = nlohmann::json::parse(to_json(r));
  EXPECT_EQ(j["metric"], "geodesic");
  std::istringstream csv(to_csv(r));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, ",t0,t1,t2,t3,t4");
  for (std::size_t i = 0; i < 5; ++i) {
    std::getline(csv, line);
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    EXPECT_EQ(cell, j["labels"][i]);
    for (std::size_t k = 0; k < 5; ++k) {
      std::getline(cells, cell, ',');
      const double from_csv = std::stod(cell);
      const double from_json = j["matrix"][i][k].get<double>();
      EXPECT_LE(std::abs(from_csv - from_json), 1e-12 * std::max(1.0, std::abs(from_json)));
    }
  }
}

TEST(Report, RawRflKeepsAsymmetryAndAmbiguity) {
  // The subdivided tree has two edges carrying 12|34, so raw matching is
  // ambiguous from one side.
  const std::vector<Tree> trees{subdivided(false, 1.0), subdivided(true, 1.0, 2.0)};
  const MatrixReport raw = compute_matrix(Metric::Rfl, trees, ids(2), {true, true});
  EXPECT_FALSE(raw.symmetric);
  ASSERT_FALSE(raw.diagnostics.empty());
  bool ambiguous = false;
  for (const auto& d : raw.diagnostics) {
    if (d.note.find("ambiguous") != std::string::npos) {
      ambiguous = true;
      EXPECT_TRUE(std::isnan(raw.values[d.i][d.j]));
    }
  }
  EXPECT_TRUE(ambiguous);
  EXPECT_NE(to_json(raw).find("null"), std::string::npos);
  const MatrixReport normalized = compute_matrix(Metric::Rfl, trees, ids(2), {});
  EXPECT_TRUE(normalized.diagnostics.empty());
  EXPECT_EQ(normalized.values[0][1], normalized.values[1][0]);
}

TEST(Report, Preconditions) {
  const std::vector<Tree> unrooted_trees{unrooted("((1,2),3,4);"), unrooted("((1,3),2,4);")};
  try {
    compute_matrix(Metric::Triplet, unrooted_trees, ids(2), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnrootedInput);
    EXPECT_NE(std::string(e.what()).find("t0"), std::string::npos);
  }
  const std::vector<Tree> mixed{rooted("((1,2),(3,4));"), rooted("((1,2),(3,5));")};
  try {
    compute_matrix(Metric::Rf, mixed, ids(2), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LabelSetMismatch);
    EXPECT_NE(std::string(e.what()).find("t1"), std::string::npos);
  }
  // A pair failure names both trees.
  const std::vector<Tree> stars{rooted("(1,2,3,4);"), rooted("((1,2),(3,4));")};
  try {
    compute_matrix(Metric::Ccc, stars, ids(2), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateVariance);
    EXPECT_NE(std::string(e.what()).find("t0 and t0"), std::string::npos);
  }
}

}  // namespace
}  // namespace treedist
