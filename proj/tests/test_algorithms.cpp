#include <gtest/gtest.h>

#include <cmath>

#include "bbg/algorithms.hpp"
#include "bbg/error.hpp"
#include "bbg/estimators.hpp"
#include "test_support.hpp"

namespace bbg {
namespace {

Point pt(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) p[i++] = x;
  return p;
}

AlgoParams params(std::size_t t, double delta, std::size_t b = 1, std::size_t l = 1, std::uint64_t seed = 1) {
  AlgoParams p;
  p.iterations = t;
  p.delta = delta;
  p.batch = b;
  p.samples = l;
  p.seed = seed;
  return p;
}

ConstraintSpec unit_interval() { return ConstraintSpec::box(Point::Ones(1)); }

bool nondecreasing(const RunTrace& trace) {
  for (std::size_t k = 1; k < trace.records.size(); ++k) {
    if ((trace.records[k].iterate.array() < trace.records[k - 1].iterate.array() - 1e-15).any()) return false;
  }
  return true;
}

TEST(AlgoParams, Validation) {
  EXPECT_THROW(params(3, 0.1).validate(), ArgumentError);
  EXPECT_THROW(params(10, 0.0).validate(), ArgumentError);
  EXPECT_THROW(params(10, 0.1, 0).validate(), ArgumentError);
  EXPECT_NO_THROW(params(4, 0.1).validate());
}

TEST(Bcg, OneDimensionalLinear) {
  FunctionObjective f(BoxDomain::unit(1), 1.0, [](const Point& x) { return x[0]; });
  const ContinuousResult r = bcg(f, BoxDomain::unit(1), unit_interval(), params(10, 0.05));
  EXPECT_NEAR(r.solution[0], 0.95, 1e-12);
  EXPECT_NEAR(f.value(r.solution), 0.95, 1e-12);
  EXPECT_GE(f.value(r.solution), 1.0 - std::exp(-1.0));
  ASSERT_EQ(r.trace.records.size(), 10u);
  // Every estimate is exactly 1, so g_bar_1 = rho_1 and each step moves by 0.9 / T.
  EXPECT_NEAR(r.trace.records[0].momentum_norm, rho_schedule(1), 1e-12);
  for (std::size_t t = 0; t < 10; ++t) {
    EXPECT_NEAR(r.trace.records[t].iterate[0], 0.05 + 0.09 * double(t + 1), 1e-12);
  }
}

TEST(Bcg, ConstantObjectiveStaysAtDelta) {
  FunctionObjective f(BoxDomain::unit(3), 0.0, [](const Point&) { return 2.0; });
  const ConstraintSpec k = ConstraintSpec::block_budget(3, {Block{{0, 1, 2}, 1.0}});
  const ContinuousResult r = bcg(f, BoxDomain::unit(3), k, params(8, 0.1));
  EXPECT_TRUE(r.solution.isApprox(Point::Constant(3, 0.1)));
}

TEST(Bcg, QueryAccounting) {
  QuadraticObjective f(nqp_generate(4, 2));
  const ConstraintSpec k = ConstraintSpec::block_budget(4, {Block{{0, 1, 2, 3}, 2.0}});
  const ContinuousResult r = bcg(f, BoxDomain::unit(4), k, params(7, 0.05, 3));
  EXPECT_EQ(r.trace.total_queries(), 42u);
  EXPECT_EQ(f.query_count(), 42u);
  for (std::size_t k2 = 0; k2 < r.trace.records.size(); ++k2) {
    EXPECT_EQ(r.trace.records[k2].iteration, k2 + 1);
    EXPECT_EQ(r.trace.records[k2].queries, 6u * (k2 + 1));
  }
}

TEST(Bcg, FeasibleMonotoneAndDeterministic) {
  QuadraticObjective f(nqp_generate(6, 3));
  const ConstraintSpec k = ConstraintSpec::block_budget(6, {Block{{0, 1, 2}, 1.5}, Block{{3, 4, 5}, 1.0}});
  const ContinuousResult a = bcg(f, BoxDomain::unit(6), k, params(40, 0.05, 2, 1, 9));
  const ContinuousResult b = bcg(f, BoxDomain::unit(6), k, params(40, 0.05, 2, 1, 9));
  EXPECT_TRUE(contains(k, a.solution, 1e-9));
  EXPECT_TRUE(nondecreasing(a.trace));
  EXPECT_EQ(a.solution, b.solution);
  for (std::size_t t = 1; t < a.trace.records.size(); ++t) {
    EXPECT_GE(a.trace.records[t].value, a.trace.records[t - 1].value - 1e-12);
  }
}

TEST(Bcg, InfeasibleTransform) {
  QuadraticObjective f(nqp_generate(2, 1));
  const ConstraintSpec k = ConstraintSpec::block_budget(2, {Block{{0, 1}, 0.1}});
  EXPECT_THROW(bcg(f, BoxDomain::unit(2), k, params(10, 0.1)), InfeasibleError);
}

// The lifted output is at most (1 - 2 delta) + delta = 0.9 here, so the
// rounded set is {0} with probability equal to that point, never above 0.9.
double singleton_pick_rate(std::size_t batch, std::size_t samples, double* mean_point) {
  int picked = 0;
  double total = 0.0;
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    FunctionSetObjective f(1, 1.0, [](const Subset& s) { return s.empty() ? 0.0 : 1.0; });
    const ConstraintSpec m = ConstraintSpec::partition_matroid(1, {{0}}, {1});
    const DiscreteResult r = dbg(f, m, params(50, 0.1, batch, samples, seed));
    EXPECT_LE(r.fractional[0], 0.9 + 1e-12);
    total += r.fractional[0];
    picked += r.solution == Subset{0};
  }
  *mean_point = total / 400.0;
  return picked / 400.0;
}

TEST(Dbg, SingletonPicksElement) {
  double mean_point = 0.0;
  const double noisy = singleton_pick_rate(1, 1, &mean_point);
  EXPECT_NEAR(noisy, mean_point, 3.0 * std::sqrt(0.25 / 400.0));
  EXPECT_GT(noisy, 0.5);  // positive drift
  const double averaged = singleton_pick_rate(8, 8, &mean_point);
  EXPECT_NEAR(averaged, mean_point, 3.0 * std::sqrt(0.25 / 400.0));
  EXPECT_GT(mean_point, 0.85);
}

TEST(Dbg, ZeroFunctionRoundsDeltaPoint) {
  const ConstraintSpec m = ConstraintSpec::partition_matroid(4, {{0, 1}, {2, 3}}, {1, 1});
  Point freq = Point::Zero(4);
  for (std::uint64_t seed = 1; seed <= 2000; ++seed) {
    FunctionSetObjective f(4, 1.0, [](const Subset&) { return 0.0; });
    const DiscreteResult r = dbg(f, m, params(4, 0.1, 1, 1, seed));
    EXPECT_TRUE(r.fractional.isApprox(Point::Constant(4, 0.1)));
    for (std::size_t i : r.solution) freq[static_cast<Eigen::Index>(i)] += 1.0 / 2000.0;
  }
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(freq[i], 0.1, 0.03);
}

TEST(Dbg, QueryAccountingAndIndependence) {
  FunctionSetObjective f(5, 3.0, [](const Subset& s) { return std::min<double>(3.0, static_cast<double>(s.size())); });
  const ConstraintSpec m = ConstraintSpec::partition_matroid(5, {{0, 1, 2}, {3, 4}}, {2, 1});
  const DiscreteResult r = dbg(f, m, params(10, 0.05, 2, 3));
  EXPECT_EQ(r.trace.total_queries(), 120u);
  EXPECT_EQ(f.query_count(), 120u);
  EXPECT_TRUE(is_independent(r.solution, m));
  EXPECT_TRUE(nondecreasing(r.trace));
}

TEST(Dbg, RejectsLargeDelta) {
  FunctionSetObjective f(2, 1.0, [](const Subset&) { return 0.0; });
  const ConstraintSpec m = ConstraintSpec::partition_matroid(2, {{0, 1}}, {1});
  EXPECT_THROW(dbg(f, m, params(10, 0.5)), DomainError);
}

TEST(Scg, LinearReachesLmoVertex) {
  const Point c = pt({1.0, 3.0, 2.0});
  FunctionObjective f(BoxDomain::unit(3), c.norm(), [c](const Point& x) { return c.dot(x); },
                      [c](const Point&) { return c; });
  const ConstraintSpec k = ConstraintSpec::block_budget(3, {Block{{0, 1, 2}, 1.5}});
  const ContinuousResult r = scg(f, k, params(20, 0.05));
  EXPECT_TRUE(r.solution.isApprox(pt({0.0, 1.0, 0.5}), 1e-12));
  EXPECT_NEAR(f.value(r.solution), 4.0, 1e-12);
  EXPECT_EQ(r.trace.total_queries(), 0u);
}

TEST(Scg, ModularGradientIsExact) {
  const Point w = pt({0.5, 1.5, 0.25, 2.0});
  FunctionSetObjective f(4, 4.25, [w](const Subset& s) {
    double v = 0.0;
    for (std::size_t i : s) v += w[static_cast<Eigen::Index>(i)];
    return v;
  });
  Rng rng(4);
  for (int k = 0; k < 20; ++k) {
    EXPECT_TRUE(sampled_partial_gradient(f, testing::random_unit_box_point(4, rng), rng).isApprox(w));
  }
  EXPECT_EQ(f.query_count(), 20u * 8u);
}

TEST(Scg, DiscreteQueryAccounting) {
  FunctionSetObjective f(6, 1.0, [](const Subset& s) { return s.empty() ? 0.0 : 1.0; });
  const ConstraintSpec m = ConstraintSpec::partition_matroid(6, {{0, 1, 2}, {3, 4, 5}}, {1, 1});
  const DiscreteResult r = scg(f, m, params(9, 0.05));
  EXPECT_EQ(r.trace.total_queries(), 2u * 6u * 9u);
  EXPECT_TRUE(is_independent(r.solution, m));
}

TEST(Ga, ConcaveOneDimensional) {
  FunctionObjective f(BoxDomain::unit(1), 1.4, [](const Point& x) { return -(x[0] - 0.3) * (x[0] - 0.3); },
                      [](const Point& x) { return Point::Constant(1, -2.0 * (x[0] - 0.3)); });
  AlgoParams p = params(100, 0.05);
  p.step0 = 0.5;
  const ContinuousResult r = ga(f, unit_interval(), p);
  EXPECT_NEAR(r.solution[0], 0.3, 0.02);
  EXPECT_EQ(r.trace.total_queries(), 0u);
}

TEST(Ga, ZeroGradientStaysPut) {
  FunctionObjective f(BoxDomain::unit(2), 0.0, [](const Point&) { return 1.0; },
                      [](const Point&) { return Point::Zero(2); });
  const ConstraintSpec k = ConstraintSpec::box(Point::Ones(2));
  const ContinuousResult r = ga(f, k, params(10, 0.05));
  for (const TraceRecord& rec : r.trace.records) EXPECT_TRUE(rec.iterate.isZero());
}

TEST(Ga, IteratesFeasible) {
  QuadraticObjective f(nqp_generate(5, 8));
  const ConstraintSpec k = ConstraintSpec::block_budget(5, {Block{{0, 1, 2, 3, 4}, 1.2}});
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    AlgoParams p = params(10, 0.05, 1, 1, seed);
    p.step0 = 0.1 * static_cast<double>(seed);
    const ContinuousResult r = ga(f, k, p);
    for (const TraceRecord& rec : r.trace.records) ASSERT_TRUE(contains(k, rec.iterate, 1e-9));
  }
}

TEST(Zga, QueryAccountingAndFeasibility) {
  QuadraticObjective f(nqp_generate(4, 6));
  const ConstraintSpec k = ConstraintSpec::block_budget(4, {Block{{0, 1}, 1.0}, Block{{2, 3}, 0.8}});
  const ContinuousResult r = zga(f, BoxDomain::unit(4), k, params(11, 0.05, 2));
  EXPECT_EQ(r.trace.total_queries(), 44u);
  for (const TraceRecord& rec : r.trace.records) EXPECT_TRUE(contains(k, rec.iterate, 1e-9));
}

TEST(Zga, DiscreteQueryAccounting) {
  FunctionSetObjective f(4, 1.0, [](const Subset& s) { return s.empty() ? 0.0 : 1.0; });
  const ConstraintSpec m = ConstraintSpec::partition_matroid(4, {{0, 1}, {2, 3}}, {1, 1});
  const DiscreteResult r = zga(f, m, params(6, 0.05, 2, 2));
  EXPECT_EQ(r.trace.total_queries(), 48u);
  EXPECT_TRUE(is_independent(r.solution, m));
}

TEST(DiameterBound, Simplex) {
  const ConstraintSpec k = ConstraintSpec::block_budget(2, {Block{{0, 1}, 1.0}});
  const double d = diameter_bound(k.polytope());
  EXPECT_GE(d, std::sqrt(2.0) - 1e-12);
  EXPECT_LE(d, std::sqrt(2.0) + 1e-12);
}

}  // namespace
}  // namespace bbg
