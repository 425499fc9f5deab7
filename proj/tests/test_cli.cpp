#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int status = -1;
  std::string out;
};

fs::path scratch() {
  const fs::path dir = TREEDIST_SCRATCH;
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

// Runs the binary with stderr discarded; returns the exit status and stdout.
RunResult run(const std::string& args) {
  const std::string cmd = std::string(TREEDIST_EXE) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

TEST(Cli, IdenticalFilesRf) {
  const auto a = write_file("a.nwk", "((1,2),(3,4));\n");
  const auto b = write_file("b.nwk", "((1,2),(3,4));\n");
  const RunResult r = run("dist --metric=rf " + a.string() + " " + b.string());
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, ",a.nwk#0,b.nwk#0\na.nwk#0,0,0\nb.nwk#0,0,0\n");
}

TEST(Cli, TripletNeedsRootedInput) {
  const auto a = write_file("u.nwk", "((1,2),3,(4,5));\n((1,3),2,(4,5));\n");
  EXPECT_EQ(run("dist --metric=triplet " + a.string()).status, 2);
}

TEST(Cli, GeodesicMatrixShape) {
  const auto a = write_file("g.nwk",
                            "((1:1,2:1):0.5,(3:1,4:1):2,5:1);\n"
                            "((1:1,3:1):1.5,(2:1,4:1):0.25,5:1);\n"
                            "((1:2,5:1):1,(3:1,4:1):1,2:1);\n");
  const RunResult r = run("dist --metric=geodesic " + a.string());
  ASSERT_EQ(r.status, 0);
  const auto rows = csv_rows(r.out);
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 1; i <= 3; ++i) {
    ASSERT_EQ(rows[i].size(), 4u);
    EXPECT_EQ(std::stod(rows[i][i]), 0.0);
    for (std::size_t j = 1; j <= 3; ++j) EXPECT_EQ(rows[i][j], rows[j][i]);
  }
  const RunResult j = run("dist --metric=geodesic --format=json " + a.string());
  EXPECT_EQ(j.status, 0);
  EXPECT_NE(j.out.find("\"metric\": \"geodesic\""), std::string::npos);
}

TEST(Cli, RandomIsDeterministicAndValid) {
  const RunResult first = run("random --n=9 --count=20 --seed=7 --weighted --rooted");
  const RunResult second = run("random --n=9 --count=20 --seed=7 --weighted --rooted");
  ASSERT_EQ(first.status, 0);
  EXPECT_EQ(first.out, second.out);
  EXPECT_NE(first.out, run("random --n=9 --count=20 --seed=8 --weighted --rooted").out);
  const auto f = write_file("random.nwk", first.out);
  const RunResult v = run("validate " + f.string());
  EXPECT_EQ(v.status, 0);
  EXPECT_EQ(v.out.find("problem"), std::string::npos);
  EXPECT_EQ(csv_rows(v.out).size(), 20u);
  EXPECT_EQ(run("random --n=1").status, 2);
}

TEST(Cli, ConsensusAndErrors) {
  const auto f = write_file("c.nwk", "(((1,2),3),(4,5));\n(((1,2),4),(3,5));\n");
  const RunResult r = run("consensus " + f.string());
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "((1,2),3,4,5);\n");
  EXPECT_EQ(run("dist --metric=rf " + (scratch() / "missing.nwk").string()).status, 1);
  EXPECT_EQ(run("dist --metric=hamming " + f.string()).status, 2);
  const auto bad = write_file("bad.nwk", "((1,2),(3,4);\n");
  EXPECT_EQ(run("validate " + bad.string()).status, 2);
  EXPECT_EQ(run("frobnicate").status, 1);
}

TEST(Cli, Bench) {
  const RunResult r = run("bench --metric=rf --sizes=50,100 --repetitions=3");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(csv_rows(r.out).size(), 3u);
  EXPECT_EQ(run("bench --metric=geodesic --sizes=16,32 --repetitions=1").status, 0);
}

}  // namespace
