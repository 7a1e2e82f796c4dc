#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bbg/bench.hpp"
#include "bbg/error.hpp"
#include "test_support.hpp"

namespace bbg {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("bbg_test_bench_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

const char* kSmallNqp = R"(
[experiment]
name = small
objective = nqp
dim = 6
constraint = block_budget
blocks = 3,3
budgets = 1.5,1
seeds = 1,2,3
timing = false

[bcg]
iterations = 10
delta = 0.05

[scg]
iterations = 10
)";

TEST(EdgeList, Parse) {
  const Graph g = parse_edge_list("0 1\n1 2");
  EXPECT_EQ(g.node_count(), 3u);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(parse_edge_list("0 1\n1 0").edge_count(), 1u);
  EXPECT_EQ(parse_edge_list("# header\n\n0 1\n").edge_count(), 1u);
}

TEST(EdgeList, Errors) {
  try {
    parse_edge_list("0 1\n1 x\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_edge_list("0 -1\n"), ParseError);
  EXPECT_THROW(parse_edge_list("0 1 2\n"), ParseError);
}

TEST(EdgeList, KarateFile) {
  const Graph g = load_edge_list(fs::path(BBG_DATA_DIR) / "karate_club.txt");
  EXPECT_EQ(g.node_count(), 34u);
  EXPECT_EQ(g.edge_count(), 78u);
  const Graph embedded = karate_club();
  for (std::size_t v = 0; v < 34; ++v) {
    auto a = g.neighbors(v), b = embedded.neighbors(v);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b) << "node " << v;
  }
}

TEST(MatrixCsv, Parse) {
  const Matrix m = parse_matrix_csv("1,0\n0.5,0.5\n");
  ASSERT_EQ(m.rows(), 2);
  ASSERT_EQ(m.cols(), 2);
  EXPECT_DOUBLE_EQ(m(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m(1, 1), 0.5);
}

TEST(MatrixCsv, Errors) {
  try {
    parse_matrix_csv("1,0\n0.5\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_matrix_csv("1,abc\n"), ParseError);
  EXPECT_THROW(validate_probability_matrix(parse_matrix_csv("1.2,0\n"), "topics"), ArgumentError);
}

TEST(BruteForce, TwoArticleCoverage) {
  Matrix p(2, 2);
  p << 1.0, 0.5, 0.0, 0.5;
  CoverageSetObjective f(std::make_shared<const Matrix>(p));
  const ConstraintSpec m = ConstraintSpec::partition_matroid(2, {{0}, {1}}, {1, 1});
  const BruteForceResult r = brute_force_opt(f, m);
  EXPECT_EQ(r.best, (Subset{0, 1}));
  EXPECT_DOUBLE_EQ(r.value, 0.75);
  EXPECT_EQ(r.sets_evaluated, 4u);
}

TEST(BruteForce, ZeroAndCounting) {
  FunctionSetObjective zero(9, 1.0, [](const Subset&) { return 0.0; });
  const ConstraintSpec m = ConstraintSpec::partition_matroid(9, {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}}, {1, 1, 1});
  const BruteForceResult r = brute_force_opt(zero, m);
  EXPECT_DOUBLE_EQ(r.value, 0.0);
  EXPECT_EQ(r.sets_evaluated, 64u);
  EXPECT_EQ(count_independent_sets(m), 64u);
  EXPECT_EQ(zero.query_count(), 0u);
}

TEST(BruteForce, MatchesMaskEnumeration) {
  Rng rng(12);
  const testing::RandomCoverage c = testing::random_coverage(8, 12, rng);
  FunctionSetObjective f(8, c.max_value(), c);
  const ConstraintSpec m = ConstraintSpec::partition_matroid(8, {{0, 1, 2}, {3, 4, 5, 6}}, {1, 2});
  double best = 0.0;
  for (std::uint64_t mask = 0; mask < 256; ++mask) {
    const int a = __builtin_popcountll(mask & 0b111);
    const int b = __builtin_popcountll(mask & 0b1111000);
    if (a <= 1 && b <= 2) best = std::max(best, c(testing::subset_of(mask, 8)));
  }
  EXPECT_NEAR(brute_force_opt(f, m).value, best, 1e-12);
}

TEST(BruteForce, RefusesLargeInstances) {
  FunctionSetObjective f(24, 1.0, [](const Subset&) { return 0.0; });
  const ConstraintSpec m = ConstraintSpec::partition_matroid(
      24, {{0, 1, 2, 3, 4, 5, 6, 7}, {8, 9, 10, 11, 12, 13, 14, 15}, {16, 17, 18, 19, 20, 21, 22, 23}},
      {5, 6, 7});
  EXPECT_THROW(brute_force_opt(f, m), CapacityError);
}

TEST(Config, ParsesAndRejects) {
  const ExperimentConfig cfg = parse_config(kSmallNqp);
  EXPECT_EQ(cfg.name, "small");
  ASSERT_EQ(cfg.algorithms.size(), 2u);
  EXPECT_EQ(cfg.algorithms[0].name, "bcg");
  EXPECT_EQ(cfg.algorithms[0].params.iterations, 10u);
  EXPECT_EQ(cfg.seeds, (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_FALSE(cfg.timing);

  EXPECT_THROW(parse_config("[experiment]\nbogus = 1\n[bcg]\n"), ParseError);
  EXPECT_THROW(parse_config("[experiment]\nobjective = nqp\n[nope]\n"), ParseError);
  EXPECT_THROW(parse_config("[experiment]\nobjective = nqp\n"), ParseError);
  EXPECT_THROW(parse_config("[experiment]\ndim = x\n[bcg]\n"), ParseError);
  EXPECT_THROW(parse_config("[experiment]\n[bcg]\niterations = 2\n"), ParseError);
  EXPECT_THROW(parse_config("[experiment]\nobjective = logdet\nconstraint = partition_matroid\n"
                            "blocks = 22\nlimits = 1\n[bcg]\n"),
               ParseError);
  EXPECT_THROW(parse_config("[experiment]\nobjective = nqp\ndim = 4\nblocks = 5\nbudgets = 1\n[bcg]\n"),
               ParseError);
  EXPECT_THROW(parse_config("[experiment]\nobjective = coverage\ndata_file = /nonexistent.csv\n[bcg]\n"),
               ParseError);
}

TEST(Config, ExampleConfigsLoad) {
  for (const char* name : {"nqp.ini", "coverage.ini", "logdet.ini", "influence.ini"}) {
    const fs::path p = fs::path(BBG_DATA_DIR) / ".." / "configs" / name;
    EXPECT_NO_THROW(load_config(p)) << name;
  }
}

TEST(Config, DataFileCoverage) {
  const fs::path dir = scratch_dir("data");
  std::ofstream(dir / "topics.csv") << "1,0.5\n0,0.5\n";
  std::ofstream(dir / "exp.ini") << "[experiment]\nobjective = coverage_set\ndata_file = topics.csv\n"
                                    "constraint = partition_matroid\nblocks = 1,1\nlimits = 1,1\n[dbg]\n";
  const ExperimentConfig cfg = load_config(dir / "exp.ini");
  const Problem problem(cfg);
  EXPECT_EQ(problem.dim(), 2u);
  EXPECT_DOUBLE_EQ(brute_force_opt(*problem.make_set_oracle(), problem.constraint()).value, 0.75);
}

TEST(Run, RowCountsAndHeaders) {
  const fs::path dir = scratch_dir("rows");
  RunOptions opt;
  opt.out_dir = dir;
  const ExperimentOutput out = run_experiment(parse_config(kSmallNqp), opt);
  EXPECT_EQ(out.trace_rows, 60u);
  EXPECT_EQ(out.summary_rows, 2u);
  EXPECT_TRUE(out.failures.empty());
  const std::string trace = slurp(out.trace_csv);
  const std::string summary = slurp(out.summary_csv);
  EXPECT_EQ(trace.substr(0, trace.find('\n')), "algorithm,seed,iteration,queries,elapsed_ms,value");
  EXPECT_EQ(summary.substr(0, summary.find('\n')),
            "algorithm,final_value_mean,final_value_sd,total_queries,relative_runtime");
  EXPECT_EQ(count_lines(trace), 61u);
  EXPECT_EQ(count_lines(summary), 3u);
}

TEST(Run, ByteIdenticalAcrossRunsAndJobs) {
  const fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b");
  RunOptions oa;
  oa.out_dir = a;
  RunOptions ob;
  ob.out_dir = b;
  ob.jobs = 4;
  const ExperimentConfig cfg = parse_config(kSmallNqp);
  const ExperimentOutput ra = run_experiment(cfg, oa);
  const ExperimentOutput rb = run_experiment(cfg, ob);
  EXPECT_EQ(slurp(ra.trace_csv), slurp(rb.trace_csv));
  EXPECT_EQ(slurp(ra.summary_csv), slurp(rb.summary_csv));
}

TEST(Run, QueriesColumnAndMonotoneValue) {
  const fs::path dir = scratch_dir("queries");
  RunOptions opt;
  opt.out_dir = dir;
  const ExperimentOutput out = run_experiment(parse_config(kSmallNqp), opt);
  std::istringstream in(slurp(out.trace_csv));
  std::string line;
  std::getline(in, line);
  double prev_value = -1.0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(c);
    ASSERT_EQ(cells.size(), 6u);
    const std::uint64_t it = std::stoull(cells[2]);
    const std::uint64_t q = std::stoull(cells[3]);
    const double value = std::stod(cells[5]);
    if (cells[0] == "bcg") {
      EXPECT_EQ(q, 2u * it);
      if (it > 1) EXPECT_GE(value, prev_value - 1e-12);
      prev_value = value;
    } else {
      EXPECT_EQ(q, 0u);
    }
  }
}

TEST(Run, SummaryReferenceRuntimeIsOne) {
  const fs::path dir = scratch_dir("summary");
  RunOptions opt;
  opt.out_dir = dir;
  ExperimentConfig cfg = parse_config(kSmallNqp);
  cfg.timing = true;
  const ExperimentOutput out = run_experiment(cfg, opt);
  std::istringstream in(slurp(out.summary_csv));
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(row.substr(0, 4), "bcg,");
  EXPECT_EQ(row.substr(row.rfind(',') + 1), "1");
}

TEST(Run, SeedOverride) {
  const fs::path dir = scratch_dir("override");
  RunOptions opt;
  opt.out_dir = dir;
  opt.seed_override = 42;
  const ExperimentOutput out = run_experiment(parse_config(kSmallNqp), opt);
  EXPECT_EQ(out.trace_rows, 20u);
  EXPECT_NE(slurp(out.trace_csv).find("bcg,42,1,"), std::string::npos);
}

TEST(Run, DiscreteExperiment) {
  const fs::path dir = scratch_dir("discrete");
  RunOptions opt;
  opt.out_dir = dir;
  const char* text = R"(
[experiment]
name = inf
objective = influence
constraint = partition_matroid
blocks = 10,14,10
limits = 2,2,2
seeds = 1
timing = false
[dbg]
iterations = 8
samples = 2
[scg]
iterations = 5
)";
  const ExperimentOutput out = run_experiment(parse_config(text), opt);
  EXPECT_EQ(out.trace_rows, 13u);
  EXPECT_TRUE(out.failures.empty());
}

TEST(Plot, WritesSvg) {
  const fs::path dir = scratch_dir("plot");
  RunOptions opt;
  opt.out_dir = dir;
  const ExperimentOutput out = run_experiment(parse_config(kSmallNqp), opt);
  write_svg_plot(out.trace_csv, dir / "plot.svg");
  const std::string svg = slurp(dir / "plot.svg");
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("bcg"), std::string::npos);
  EXPECT_THROW(write_svg_plot(dir / "missing.csv", dir / "x.svg"), Error);
}

TEST(ReferenceOpt, LinearObjective) {
  const Point c = (Point(3) << 1.0, 3.0, 2.0).finished();
  FunctionObjective f(BoxDomain::unit(3), c.norm(), [c](const Point& x) { return c.dot(x); },
                      [c](const Point&) { return c; });
  const ConstraintSpec k = ConstraintSpec::block_budget(3, {Block{{0, 1, 2}, 1.5}});
  EXPECT_NEAR(continuous_reference_opt(f, k, 5, 500, 1).value, 4.0, 1e-6);
}

}  // namespace
}  // namespace bbg
