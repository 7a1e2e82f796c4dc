#include <gtest/gtest.h>

#include "bbg/core.hpp"
#include "bbg/error.hpp"
#include "bbg/random.hpp"

namespace bbg {
namespace {

Point pt(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) p[i++] = x;
  return p;
}

ConstraintSpec simplex2() {
  return ConstraintSpec::block_budget(2, {Block{{0, 1}, 1.0}});
}

TEST(ShrinkDomain, UnitCube) {
  const BoxDomain shrunk = shrink_domain(BoxDomain::unit(3), 0.1);
  EXPECT_TRUE(shrunk.upper().isApprox(Point::Constant(3, 0.8)));
}

TEST(ShrinkDomain, NonUniformSides) {
  const BoxDomain shrunk = shrink_domain(BoxDomain(pt({1.0, 2.0})), 0.25);
  EXPECT_DOUBLE_EQ(shrunk.upper()[0], 0.5);
  EXPECT_DOUBLE_EQ(shrunk.upper()[1], 1.5);
}

TEST(ShrinkDomain, DegenerateBoxRejected) {
  EXPECT_THROW(shrink_domain(BoxDomain::unit(2), 0.5), DomainError);
  EXPECT_THROW(shrink_domain(BoxDomain::unit(2), 0.0), DomainError);
}

TEST(TransformConstraint, SimplexShrinksBudget) {
  const TransformedConstraint k = transform_constraint(BoxDomain::unit(2), simplex2(), 0.1);
  EXPECT_TRUE(k.polytope().upper.isApprox(Point::Constant(2, 0.8)));
  ASSERT_EQ(k.polytope().blocks.size(), 1u);
  EXPECT_NEAR(k.polytope().blocks[0].budget, 0.8, 1e-15);
}

TEST(TransformConstraint, Box) {
  const TransformedConstraint k =
      transform_constraint(BoxDomain::unit(3), ConstraintSpec::box(Point::Ones(3)), 0.2);
  EXPECT_TRUE(k.polytope().upper.isApprox(Point::Constant(3, 0.6)));
  EXPECT_TRUE(k.polytope().blocks.empty());
}

TEST(TransformConstraint, BudgetBelowShiftIsInfeasible) {
  const ConstraintSpec k = ConstraintSpec::block_budget(2, {Block{{0, 1}, 0.1}});
  EXPECT_THROW(transform_constraint(BoxDomain::unit(2), k, 0.1), InfeasibleError);
}

TEST(TransformConstraint, DimensionMismatch) {
  EXPECT_THROW(transform_constraint(BoxDomain::unit(3), simplex2(), 0.1), ArgumentError);
}

TEST(Contains, TransformedSimplex) {
  const TransformedConstraint k = transform_constraint(BoxDomain::unit(2), simplex2(), 0.1);
  EXPECT_TRUE(contains(k, pt({0.4, 0.4}), 0.0));
  EXPECT_FALSE(contains(k, pt({0.5, 0.4}), 0.0));
  EXPECT_TRUE(contains(k, pt({0.8 + 1e-12, 0.0}), 1e-9));
  EXPECT_THROW(contains(k, pt({0.1, 0.1, 0.1}), 0.0), ArgumentError);
}

TEST(ConstraintSpec, RejectsBadBlocks) {
  EXPECT_THROW(ConstraintSpec::block_budget(3, {Block{{0, 1}, 1.0}, Block{{1, 2}, 1.0}}), ArgumentError);
  EXPECT_THROW(ConstraintSpec::block_budget(2, {Block{{0, 1}, 3.0}}), ArgumentError);
  EXPECT_THROW(ConstraintSpec::block_budget(2, {Block{{0, 5}, 1.0}}), ArgumentError);
  EXPECT_THROW(ConstraintSpec::partition_matroid(2, {{0, 1}}, {0}), ArgumentError);
}

TEST(ConstraintSpec, UncoveredCoordinatesOnlyBoxed) {
  const ConstraintSpec k = ConstraintSpec::block_budget(3, {Block{{0, 1}, 1.0}});
  EXPECT_TRUE(contains(k, pt({0.5, 0.5, 1.0})));
  EXPECT_FALSE(contains(k, pt({0.5, 0.5, 1.1})));
}

// Sampled-membership properties of the transform.
TEST(TransformConstraint, Properties) {
  Rng rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const ConstraintSpec k =
      ConstraintSpec::block_budget(5, {Block{{0, 1, 2}, 1.5}, Block{{3, 4}, 1.2}});
  const BoxDomain d = BoxDomain::unit(5);
  const TransformedConstraint small = transform_constraint(d, k, 0.05);
  const TransformedConstraint large = transform_constraint(d, k, 0.15);
  EXPECT_TRUE(contains(small, Point::Zero(5)));
  EXPECT_TRUE(contains(large, Point::Zero(5)));
  int inside = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    Point x(5);
    for (Eigen::Index i = 0; i < 5; ++i) x[i] = 0.9 * unif(rng);
    if (contains(large, x)) {
      ++inside;
      EXPECT_TRUE(contains(small, x));                     // monotone in delta
      EXPECT_TRUE(contains(k, x.array() + 0.15));          // lift is feasible
    }
    if (contains(small, x)) EXPECT_TRUE(contains(k, x.array() + 0.05));
  }
  EXPECT_GT(inside, 100);
}

}  // namespace
}  // namespace bbg
