#include "bbg/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include <fmt/format.h>

#include "bbg/error.hpp"

namespace bbg {

void require_dim(const Point& x, std::size_t dim, const char* what) {
  if (static_cast<std::size_t>(x.size()) != dim) {
    throw ArgumentError(fmt::format("{}: expected dimension {}, got {}", what, dim, x.size()));
  }
}

BoxDomain::BoxDomain(Point upper) : upper_(std::move(upper)) {
  if (upper_.size() == 0) throw ArgumentError("box domain must have at least one coordinate");
  for (Eigen::Index i = 0; i < upper_.size(); ++i) {
    if (!(upper_[i] > 0.0) || !std::isfinite(upper_[i])) {
      throw ArgumentError(fmt::format("box upper bound a_{} = {} must be positive", i, upper_[i]));
    }
  }
}

BoxDomain BoxDomain::unit(std::size_t dim) {
  return BoxDomain(Point::Ones(static_cast<Eigen::Index>(dim)));
}

bool BoxDomain::contains(const Point& x, double tol) const {
  require_dim(x, dim(), "BoxDomain::contains");
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || x[i] < -tol || x[i] > upper_[i] + tol) return false;
  }
  return true;
}

const char* to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::Box:
      return "box";
    case ConstraintKind::BlockBudget:
      return "block_budget";
    case ConstraintKind::PartitionMatroid:
      return "partition_matroid";
  }
  return "unknown";
}

namespace {

void validate_blocks(std::size_t dim, const std::vector<Block>& blocks, const Point& upper) {
  std::vector<bool> seen(dim, false);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const Block& block = blocks[k];
    if (block.indices.empty()) throw ArgumentError(fmt::format("block {} is empty", k));
    if (!(block.budget > 0.0) || !std::isfinite(block.budget)) {
      throw ArgumentError(fmt::format("block {} budget {} must be positive", k, block.budget));
    }
    double capacity = 0.0;
    for (std::size_t i : block.indices) {
      if (i >= dim) throw ArgumentError(fmt::format("block {} index {} out of range", k, i));
      if (seen[i]) throw ArgumentError(fmt::format("coordinate {} appears in two blocks", i));
      seen[i] = true;
      capacity += upper[static_cast<Eigen::Index>(i)];
    }
    if (block.budget > capacity) {
      throw ArgumentError(
          fmt::format("block {} budget {} exceeds cap * |block| = {}", k, block.budget, capacity));
    }
  }
}

}  // namespace

ConstraintSpec::ConstraintSpec(ConstraintKind kind, BudgetPolytope polytope, std::vector<int> limits)
    : kind_(kind), polytope_(std::move(polytope)), limits_(std::move(limits)) {}

ConstraintSpec ConstraintSpec::box(Point upper) {
  BoxDomain check(upper);  // validates positivity
  return ConstraintSpec(ConstraintKind::Box, BudgetPolytope{std::move(upper), {}}, {});
}

ConstraintSpec ConstraintSpec::block_budget(std::size_t dim, std::vector<Block> blocks, double cap) {
  if (dim == 0) throw ArgumentError("constraint dimension must be positive");
  if (!(cap > 0.0)) throw ArgumentError(fmt::format("per-coordinate cap {} must be positive", cap));
  Point upper = Point::Constant(static_cast<Eigen::Index>(dim), cap);
  validate_blocks(dim, blocks, upper);
  return ConstraintSpec(ConstraintKind::BlockBudget, BudgetPolytope{std::move(upper), std::move(blocks)},
                        {});
}

ConstraintSpec ConstraintSpec::partition_matroid(std::size_t dim,
                                                 std::vector<std::vector<std::size_t>> blocks,
                                                 std::vector<int> limits) {
  if (dim == 0) throw ArgumentError("constraint dimension must be positive");
  if (blocks.size() != limits.size()) {
    throw ArgumentError(fmt::format("{} blocks but {} limits", blocks.size(), limits.size()));
  }
  std::vector<Block> budgeted;
  budgeted.reserve(blocks.size());
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (limits[j] <= 0) throw ArgumentError(fmt::format("limit of block {} must be positive", j));
    budgeted.push_back(Block{std::move(blocks[j]), static_cast<double>(limits[j])});
  }
  Point upper = Point::Ones(static_cast<Eigen::Index>(dim));
  validate_blocks(dim, budgeted, upper);
  return ConstraintSpec(ConstraintKind::PartitionMatroid,
                        BudgetPolytope{std::move(upper), std::move(budgeted)}, std::move(limits));
}

TransformedConstraint::TransformedConstraint(ConstraintSpec base, double delta, BudgetPolytope polytope)
    : base_(std::move(base)), delta_(delta), polytope_(std::move(polytope)) {}

BoxDomain shrink_domain(const BoxDomain& domain, double delta) {
  if (!(delta > 0.0)) throw DomainError(fmt::format("smoothing radius {} must be positive", delta));
  const double min_side = domain.upper().minCoeff();
  if (!(delta < min_side / 2.0)) {
    throw DomainError(
        fmt::format("radius {} leaves an empty shrunk box (need delta < {})", delta, min_side / 2.0));
  }
  return BoxDomain(domain.upper().array() - 2.0 * delta);
}

TransformedConstraint transform_constraint(const BoxDomain& domain, const ConstraintSpec& constraint,
                                           double delta) {
  if (domain.dim() != constraint.dim()) {
    throw ArgumentError(fmt::format("domain has dimension {} but constraint has {}", domain.dim(),
                                    constraint.dim()));
  }
  const BoxDomain shrunk = shrink_domain(domain, delta);
  const BudgetPolytope& k = constraint.polytope();
  for (Eigen::Index i = 0; i < k.upper.size(); ++i) {
    if (k.upper[i] > domain.upper()[i]) {
      throw ArgumentError(fmt::format("constraint cap {} on coordinate {} exceeds the domain bound {}",
                                      k.upper[i], i, domain.upper()[i]));
    }
  }

  // x + delta*1 in K  <=>  -delta <= x_i <= cap_i - delta and
  // sum_{B_k} x_i <= b_k - delta |B_k|; intersect with [0, a_i - 2 delta].
  BudgetPolytope out;
  out.upper = shrunk.upper().cwiseMin((k.upper.array() - delta).matrix());
  for (Eigen::Index i = 0; i < out.upper.size(); ++i) {
    if (!(out.upper[i] > 0.0)) {
      throw InfeasibleError(
          fmt::format("coordinate {} has no room after shrinking by {}", i, delta));
    }
  }
  out.blocks.reserve(k.blocks.size());
  for (std::size_t b = 0; b < k.blocks.size(); ++b) {
    const Block& block = k.blocks[b];
    double budget = block.budget - delta * static_cast<double>(block.indices.size());
    if (budget < -1e-12) {
      throw InfeasibleError(fmt::format("block {} budget {} is below delta * |block| = {}", b,
                                        block.budget,
                                        delta * static_cast<double>(block.indices.size())));
    }
    out.blocks.push_back(Block{block.indices, std::max(budget, 0.0)});
  }
  return TransformedConstraint(constraint, delta, std::move(out));
}

double max_violation(const BudgetPolytope& polytope, const Point& x) {
  require_dim(x, polytope.dim(), "max_violation");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) return std::numeric_limits<double>::infinity();
    worst = std::max({worst, -x[i], x[i] - polytope.upper[i]});
  }
  for (const Block& block : polytope.blocks) {
    double sum = 0.0;
    for (std::size_t i : block.indices) sum += x[static_cast<Eigen::Index>(i)];
    worst = std::max(worst, sum - block.budget);
  }
  return worst;
}

bool contains(const BudgetPolytope& polytope, const Point& x, double tol) {
  return max_violation(polytope, x) <= tol;
}

bool contains(const ConstraintSpec& constraint, const Point& x, double tol) {
  return contains(constraint.polytope(), x, tol);
}

bool contains(const TransformedConstraint& constraint, const Point& x, double tol) {
  return contains(constraint.polytope(), x, tol);
}

}  // namespace bbg
