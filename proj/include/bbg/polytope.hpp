#pragma once

#include <cstddef>
#include <vector>

#include "bbg/core.hpp"
#include "bbg/objectives.hpp"
#include "bbg/random.hpp"

namespace bbg {

// argmax_{v in P} <v, g>. Per block, positive-gradient coordinates are filled
// to their cap in decreasing order of g (ties: lowest index first) until the
// budget runs out; the last one may be fractional. Coordinates with g_i <= 0
// stay at 0.
Point lmo(const BudgetPolytope& polytope, const Point& g);
Point lmo(const ConstraintSpec& constraint, const Point& g);
Point lmo(const TransformedConstraint& constraint, const Point& g);

inline constexpr double kProjectionTol = 1e-10;

// Euclidean projection argmin_{x in P} ||x - y||. Per block,
// x_i = clip(y_i - lambda, 0, cap_i) with lambda >= 0 found by bisection.
Point project(const BudgetPolytope& polytope, const Point& y);
Point project(const ConstraintSpec& constraint, const Point& y);

// Marginal-preserving randomized rounding of a point of a partition-matroid
// polytope to an independent set. Throws InfeasibleError if x is outside the
// polytope by more than 1e-9.
Subset swap_round(const Point& x, const ConstraintSpec& matroid, Rng& rng);

// Clips x to [0,1] and rescales any block whose sum exceeds its limit. Returns
// the pre-repair violation through `violation`. Throws InfeasibleError when
// the violation exceeds 1e-6.
Point repair_for_rounding(const Point& x, const ConstraintSpec& matroid, double* violation = nullptr);

// True iff s takes at most limits[j] elements from every block.
bool is_independent(const Subset& s, const ConstraintSpec& matroid);

inline constexpr std::size_t kMaxVertexEnumerationDim = 10;

// Candidate vertices of a small polytope: every combination where each
// coordinate sits at 0 or its cap, except at most one per block that absorbs
// the remaining budget. Infeasible candidates are dropped. Contains every
// vertex (plus possibly some non-extreme points).
std::vector<Point> enumerate_vertices(const BudgetPolytope& polytope);

}  // namespace bbg
