#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace bbg {

// Dense real vector used for iterates, vertices and gradients.
using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kDefaultFeasibilityTol = 1e-9;

// The box prod_i [0, a_i] that an objective is defined on.
class BoxDomain {
 public:
  explicit BoxDomain(Point upper);
  static BoxDomain unit(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(upper_.size()); }
  const Point& upper() const { return upper_; }

  // True iff -tol <= x_i <= a_i + tol for every coordinate.
  bool contains(const Point& x, double tol = kDefaultFeasibilityTol) const;

 private:
  Point upper_;
};

// A set of coordinates sharing one linear budget: sum_{i in indices} x_i <= budget.
struct Block {
  std::vector<std::size_t> indices;
  double budget = 0.0;
};

// {x : 0 <= x <= upper, sum over each block <= its budget}. Every constraint
// family handled by the library (box, block budgets, partition-matroid
// polytope, and their shrunk/translated images) is one of these.
struct BudgetPolytope {
  Point upper;
  std::vector<Block> blocks;

  std::size_t dim() const { return static_cast<std::size_t>(upper.size()); }
};

enum class ConstraintKind { Box, BlockBudget, PartitionMatroid };

const char* to_string(ConstraintKind kind);

// Declarative description of a constraint set K. Immutable once built.
class ConstraintSpec {
 public:
  // K = prod_i [0, upper_i].
  static ConstraintSpec box(Point upper);

  // K = {0 <= x <= cap, sum_{i in B_k} x_i <= b_k}. Coordinates outside every
  // block are bounded by the cap only.
  static ConstraintSpec block_budget(std::size_t dim, std::vector<Block> blocks,
                                     double cap = 1.0);

  // Polytope of the partition matroid: at most limits[j] elements of blocks[j].
  static ConstraintSpec partition_matroid(std::size_t dim,
                                          std::vector<std::vector<std::size_t>> blocks,
                                          std::vector<int> limits);

  ConstraintKind kind() const { return kind_; }
  std::size_t dim() const { return polytope_.dim(); }
  const BudgetPolytope& polytope() const { return polytope_; }
  // Cardinality limits; empty unless kind() == PartitionMatroid.
  const std::vector<int>& limits() const { return limits_; }

 private:
  ConstraintSpec(ConstraintKind kind, BudgetPolytope polytope, std::vector<int> limits);

  ConstraintKind kind_;
  BudgetPolytope polytope_;
  std::vector<int> limits_;
};

// K' = D_delta ∩ (K - delta*1): the set Frank-Wolfe iterates live in, so that
// every smoothing sample delta*1 + x ± delta*u stays inside D.
class TransformedConstraint {
 public:
  TransformedConstraint(ConstraintSpec base, double delta, BudgetPolytope polytope);

  const ConstraintSpec& base() const { return base_; }
  double delta() const { return delta_; }
  const BudgetPolytope& polytope() const { return polytope_; }
  std::size_t dim() const { return polytope_.dim(); }

 private:
  ConstraintSpec base_;
  double delta_;
  BudgetPolytope polytope_;
};

// D_delta = prod_i [0, a_i - 2 delta]. Throws DomainError unless delta < min_i a_i / 2.
BoxDomain shrink_domain(const BoxDomain& domain, double delta);

// Throws DomainError for a bad delta, ArgumentError if K is not inside D, and
// InfeasibleError when some block budget drops below delta * |block|.
TransformedConstraint transform_constraint(const BoxDomain& domain, const ConstraintSpec& constraint,
                                           double delta);

bool contains(const BudgetPolytope& polytope, const Point& x, double tol = kDefaultFeasibilityTol);
bool contains(const ConstraintSpec& constraint, const Point& x, double tol = kDefaultFeasibilityTol);
bool contains(const TransformedConstraint& constraint, const Point& x,
              double tol = kDefaultFeasibilityTol);

// Largest amount by which x violates any box or budget inequality (0 if feasible).
double max_violation(const BudgetPolytope& polytope, const Point& x);

void require_dim(const Point& x, std::size_t dim, const char* what);

}  // namespace bbg
