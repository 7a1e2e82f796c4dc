#include "bbg/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include <fmt/format.h>

#include "bbg/error.hpp"

namespace bbg {

namespace {

// Coordinates that belong to no block.
std::vector<std::size_t> free_coordinates(const BudgetPolytope& polytope) {
  std::vector<bool> owned(polytope.dim(), false);
  for (const Block& block : polytope.blocks) {
    for (std::size_t i : block.indices) owned[i] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < owned.size(); ++i) {
    if (!owned[i]) out.push_back(i);
  }
  return out;
}

inline Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

Point lmo(const BudgetPolytope& polytope, const Point& g) {
  require_dim(g, polytope.dim(), "lmo");
  Point v = Point::Zero(g.size());
  for (std::size_t i : free_coordinates(polytope)) {
    if (g[idx(i)] > 0.0) v[idx(i)] = polytope.upper[idx(i)];
  }
  std::vector<std::size_t> order;
  for (const Block& block : polytope.blocks) {
    order.clear();
    for (std::size_t i : block.indices) {
      if (g[idx(i)] > 0.0) order.push_back(i);
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (g[idx(a)] != g[idx(b)]) return g[idx(a)] > g[idx(b)];
      return a < b;
    });
    double remaining = block.budget;
    for (std::size_t i : order) {
      if (remaining <= 0.0) break;
      const double take = std::min(polytope.upper[idx(i)], remaining);
      v[idx(i)] = take;
      remaining -= take;
    }
  }
  return v;
}

Point lmo(const ConstraintSpec& constraint, const Point& g) { return lmo(constraint.polytope(), g); }

Point lmo(const TransformedConstraint& constraint, const Point& g) {
  return lmo(constraint.polytope(), g);
}

namespace {

double shifted_sum(const Block& block, const Point& y, const Point& upper, double lambda) {
  double sum = 0.0;
  for (std::size_t i : block.indices) sum += std::clamp(y[idx(i)] - lambda, 0.0, upper[idx(i)]);
  return sum;
}

// Smallest lambda >= 0 with sum_i clip(y_i - lambda, 0, cap_i) <= budget.
double block_threshold(const Block& block, const Point& y, const Point& upper) {
  if (shifted_sum(block, y, upper, 0.0) <= block.budget) return 0.0;
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t i : block.indices) hi = std::max(hi, y[idx(i)]);
  while (hi - lo > kProjectionTol) {
    const double mid = 0.5 * (lo + hi);
    if (shifted_sum(block, y, upper, mid) > block.budget) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // Solve the piecewise-linear equation exactly on the active set found at hi.
  double free_sum = 0.0;
  double capped_sum = 0.0;
  std::size_t free_count = 0;
  for (std::size_t i : block.indices) {
    const double shifted = y[idx(i)] - hi;
    if (shifted >= upper[idx(i)]) {
      capped_sum += upper[idx(i)];
    } else if (shifted > 0.0) {
      free_sum += y[idx(i)];
      ++free_count;
    }
  }
  if (free_count > 0) {
    const double exact = (free_sum + capped_sum - block.budget) / static_cast<double>(free_count);
    if (exact >= lo - kProjectionTol && exact <= hi + kProjectionTol && exact >= 0.0) return exact;
  }
  return hi;
}

}  // namespace

Point project(const BudgetPolytope& polytope, const Point& y) {
  require_dim(y, polytope.dim(), "project");
  Point x = y.cwiseMax(0.0).cwiseMin(polytope.upper);
  for (const Block& block : polytope.blocks) {
    const double lambda = block_threshold(block, y, polytope.upper);
    for (std::size_t i : block.indices) {
      x[idx(i)] = std::clamp(y[idx(i)] - lambda, 0.0, polytope.upper[idx(i)]);
    }
  }
  return x;
}

Point project(const ConstraintSpec& constraint, const Point& y) {
  return project(constraint.polytope(), y);
}

namespace {

void require_matroid(const ConstraintSpec& matroid, const char* what) {
  if (matroid.kind() != ConstraintKind::PartitionMatroid) {
    throw ArgumentError(fmt::format("{} needs a partition-matroid constraint, got {}", what,
                                    to_string(matroid.kind())));
  }
}

constexpr double kIntegralEps = 1e-12;

bool is_fractional(double v) { return v > kIntegralEps && v < 1.0 - kIntegralEps; }

}  // namespace

Subset swap_round(const Point& x, const ConstraintSpec& matroid, Rng& rng) {
  require_matroid(matroid, "swap_round");
  require_dim(x, matroid.dim(), "swap_round");
  const BudgetPolytope& poly = matroid.polytope();
  const double violation = max_violation(poly, x);
  if (violation > kDefaultFeasibilityTol) {
    throw InfeasibleError(
        fmt::format("swap_round: point violates the matroid polytope by {}", violation));
  }

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Point y = x.cwiseMax(0.0).cwiseMin(1.0);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] <= kIntegralEps) y[i] = 0.0;
    if (y[i] >= 1.0 - kIntegralEps) y[i] = 1.0;
  }

  for (std::size_t b = 0; b < poly.blocks.size(); ++b) {
    const Block& block = poly.blocks[b];
    std::vector<std::size_t> frac;
    for (std::size_t i : block.indices) {
      if (is_fractional(y[idx(i)])) frac.push_back(i);
    }
    // Merge pairs until at most one fractional coordinate remains; each merge
    // keeps E[y_i] and E[y_j] and makes at least one of them integral.
    while (frac.size() >= 2) {
      const std::size_t i = frac[frac.size() - 2];
      const std::size_t j = frac[frac.size() - 1];
      double& xi = y[idx(i)];
      double& xj = y[idx(j)];
      const double sum = xi + xj;
      if (sum <= 1.0) {
        if (unif(rng) < xi / sum) {
          xi = sum;
          xj = 0.0;
        } else {
          xj = sum;
          xi = 0.0;
        }
      } else {
        if (unif(rng) < (1.0 - xj) / (2.0 - sum)) {
          xi = 1.0;
          xj = sum - 1.0;
        } else {
          xj = 1.0;
          xi = sum - 1.0;
        }
      }
      for (double* v : {&xi, &xj}) {
        if (*v <= kIntegralEps) *v = 0.0;
        if (*v >= 1.0 - kIntegralEps) *v = 1.0;
      }
      frac.erase(std::remove_if(frac.end() - 2, frac.end(),
                                [&](std::size_t k) { return !is_fractional(y[idx(k)]); }),
                 frac.end());
    }
    if (!frac.empty()) {
      const std::size_t i = frac.front();
      std::size_t ones = 0;
      for (std::size_t k : block.indices) ones += y[idx(k)] == 1.0 ? 1 : 0;
      const bool full = ones >= static_cast<std::size_t>(matroid.limits()[b]);
      y[idx(i)] = (!full && unif(rng) < y[idx(i)]) ? 1.0 : 0.0;
    }
  }
  for (std::size_t i : free_coordinates(poly)) {
    if (is_fractional(y[idx(i)])) y[idx(i)] = unif(rng) < y[idx(i)] ? 1.0 : 0.0;
  }

  Subset s;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] == 1.0) s.push_back(static_cast<std::size_t>(i));
  }
  return s;
}

Point repair_for_rounding(const Point& x, const ConstraintSpec& matroid, double* violation) {
  require_matroid(matroid, "repair_for_rounding");
  require_dim(x, matroid.dim(), "repair_for_rounding");
  const double overshoot = max_violation(matroid.polytope(), x);
  if (violation != nullptr) *violation = overshoot;
  if (overshoot > 1e-6) {
    throw InfeasibleError(
        fmt::format("point exceeds the matroid polytope by {} (> 1e-6); refusing to round", overshoot));
  }
  Point y = x.cwiseMax(0.0).cwiseMin(1.0);
  for (const Block& block : matroid.polytope().blocks) {
    double sum = 0.0;
    for (std::size_t i : block.indices) sum += y[idx(i)];
    if (sum > block.budget) {
      const double scale = block.budget / sum;
      for (std::size_t i : block.indices) y[idx(i)] *= scale;
    }
  }
  return y;
}

bool is_independent(const Subset& s, const ConstraintSpec& matroid) {
  require_matroid(matroid, "is_independent");
  std::vector<bool> member(matroid.dim(), false);
  for (std::size_t i : s) {
    if (i >= matroid.dim() || member[i]) return false;
    member[i] = true;
  }
  const auto& blocks = matroid.polytope().blocks;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    int count = 0;
    for (std::size_t i : blocks[b].indices) count += member[i] ? 1 : 0;
    if (count > matroid.limits()[b]) return false;
  }
  return true;
}

std::vector<Point> enumerate_vertices(const BudgetPolytope& polytope) {
  const std::size_t d = polytope.dim();
  if (d > kMaxVertexEnumerationDim) {
    throw CapacityError(
        fmt::format("vertex enumeration limited to d <= {}, got {}", kMaxVertexEnumerationDim, d));
  }

  // Each group is a set of coordinates with its own list of partial
  // assignments; the vertex set is the Cartesian product over groups.
  struct Group {
    std::vector<std::size_t> coords;
    std::vector<std::vector<double>> choices;
  };
  std::vector<Group> groups;

  for (std::size_t i : free_coordinates(polytope)) {
    groups.push_back(Group{{i}, {{0.0}, {polytope.upper[idx(i)]}}});
  }
  for (const Block& block : polytope.blocks) {
    Group group{block.indices, {}};
    const std::size_t m = block.indices.size();
    const std::size_t combos = std::size_t{1} << m;
    for (std::size_t mask = 0; mask < combos; ++mask) {
      std::vector<double> values(m, 0.0);
      double used = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        if (mask & (std::size_t{1} << k)) {
          values[k] = polytope.upper[idx(block.indices[k])];
          used += values[k];
        }
      }
      if (used > block.budget + 1e-12) continue;
      group.choices.push_back(values);
      // One coordinate outside the mask takes the leftover budget.
      const double rest = block.budget - used;
      for (std::size_t k = 0; k < m; ++k) {
        if (mask & (std::size_t{1} << k)) continue;
        const double cap = polytope.upper[idx(block.indices[k])];
        if (rest > 1e-12 && rest < cap - 1e-12) {
          std::vector<double> frac = values;
          frac[k] = rest;
          group.choices.push_back(std::move(frac));
        }
      }
    }
    groups.push_back(std::move(group));
  }

  std::vector<Point> out;
  Point current = Point::Zero(idx(d));
  std::vector<std::size_t> pick(groups.size(), 0);
  while (true) {
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const auto& choice = groups[gi].choices[pick[gi]];
      for (std::size_t k = 0; k < groups[gi].coords.size(); ++k) current[idx(groups[gi].coords[k])] = choice[k];
    }
    if (contains(polytope, current, 1e-12)) out.push_back(current);
    std::size_t gi = 0;
    while (gi < groups.size() && ++pick[gi] == groups[gi].choices.size()) {
      pick[gi] = 0;
      ++gi;
    }
    if (gi == groups.size()) break;
  }
  return out;
}

}  // namespace bbg
