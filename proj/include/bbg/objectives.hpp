#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "bbg/core.hpp"
#include "bbg/random.hpp"

namespace bbg {

// Continuous objective F on a box domain. eval() is the counted oracle query;
// value() is the noiseless, uncounted evaluation used for instrumentation.
class ValueOracle {
 public:
  ValueOracle(BoxDomain domain, double lipschitz);
  virtual ~ValueOracle() = default;
  ValueOracle(const ValueOracle&) = delete;
  ValueOracle& operator=(const ValueOracle&) = delete;

  // One oracle query. Throws DomainError if x is outside the domain.
  double eval(const Point& x);

  virtual double value(const Point& x) const = 0;
  virtual bool has_gradient() const { return false; }
  // Exact gradient; throws ArgumentError when has_gradient() is false.
  virtual Point gradient(const Point& x) const;

  std::size_t dim() const { return domain_.dim(); }
  const BoxDomain& domain() const { return domain_; }
  double lipschitz() const { return lipschitz_; }
  std::uint64_t query_count() const { return queries_.load(std::memory_order_relaxed); }

 protected:
  // What a query returns; noise wrappers override this.
  virtual double sample(const Point& x) { return value(x); }

 private:
  BoxDomain domain_;
  double lipschitz_;
  std::atomic<std::uint64_t> queries_{0};
};

// Sorted ascending element indices of a subset of the ground set {0..d-1}.
using Subset = std::vector<std::size_t>;

// Set function f on {0..d-1} with sup |f| <= bound().
class SetOracle {
 public:
  SetOracle(std::size_t ground_size, double bound);
  virtual ~SetOracle() = default;
  SetOracle(const SetOracle&) = delete;
  SetOracle& operator=(const SetOracle&) = delete;

  // One counted query.
  double eval_set(const Subset& s);

  virtual double value(const Subset& s) const = 0;
  // Closed form of the multilinear extension when the objective has one.
  virtual std::optional<double> multilinear(const Point& /*x*/) const { return std::nullopt; }

  std::size_t ground_size() const { return ground_size_; }
  double bound() const { return bound_; }
  std::uint64_t query_count() const { return queries_.load(std::memory_order_relaxed); }

 protected:
  void check_subset(const Subset& s) const;

 private:
  std::size_t ground_size_;
  double bound_;
  std::atomic<std::uint64_t> queries_{0};
};

// ---------------------------------------------------------------------------
// Non-convex/non-concave quadratic programming: F(x) = 1/2 x'Hx + b'x.

struct QuadraticInstance {
  Matrix hessian;
  Point linear;
};

// H_ij = -|N(0,1)| i.i.d., symmetrized as (H + H')/2, and b = -H'1, so the
// gradient Hx + b is nonnegative on [0,1]^d.
QuadraticInstance nqp_generate(std::size_t dim, std::uint64_t seed);

double nqp_eval(const Matrix& hessian, const Point& linear, const Point& x);

class QuadraticObjective final : public ValueOracle {
 public:
  // Domain [0,1]^d; G = ||b|| bounds the gradient norm there.
  explicit QuadraticObjective(QuadraticInstance instance);

  double value(const Point& x) const override;
  bool has_gradient() const override { return true; }
  Point gradient(const Point& x) const override;
  const QuadraticInstance& instance() const { return instance_; }

 private:
  QuadraticInstance instance_;
};

// ---------------------------------------------------------------------------
// Probabilistic topic coverage. topics is k x d: column a is the topic
// distribution of article a.

double coverage_eval(const Matrix& topics, const Point& x);
double coverage_set_eval(const Matrix& topics, const Subset& s);
void validate_probability_matrix(const Matrix& m, const char* what);

class CoverageObjective final : public ValueOracle {
 public:
  explicit CoverageObjective(std::shared_ptr<const Matrix> topics);

  double value(const Point& x) const override;
  bool has_gradient() const override { return true; }
  Point gradient(const Point& x) const override;

 private:
  std::shared_ptr<const Matrix> topics_;
};

class CoverageSetObjective final : public SetOracle {
 public:
  explicit CoverageSetObjective(std::shared_ptr<const Matrix> topics);

  double value(const Subset& s) const override;
  std::optional<double> multilinear(const Point& x) const override;

 private:
  std::shared_ptr<const Matrix> topics_;
};

// Dirichlet(1,...,1) topic distributions, one column per article.
Matrix synthesize_topics(std::size_t topics, std::size_t articles, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Active set selection: f(S) = log det(I + Sigma_SS).

double logdet_eval(const Matrix& covariance, const Subset& s);

// Sigma_ij = exp(-||X[:,i] - X[:,j]||^2 / h^2) over the columns of data.
Matrix rbf_covariance(const Matrix& data, double bandwidth);

class LogDetObjective final : public SetOracle {
 public:
  // Bound M = log det(I + Sigma), the value of the full ground set.
  explicit LogDetObjective(std::shared_ptr<const Matrix> covariance);

  double value(const Subset& s) const override;

 private:
  std::shared_ptr<const Matrix> covariance_;
};

// Data matrix, n rows (records) by d columns (attributes). Attributes fall
// into about d/4 groups; each is its group's Gaussian latent column plus
// noise at half that scale, everything divided by sqrt(n) so that squared
// column distances are O(1) and the RBF kernel at h = 0.75 is not diagonal.
Matrix synthesize_data(std::size_t rows, std::size_t columns, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Influence maximization with one-hop influence: f(S) = |S ∪ N(S)|.

class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t nodes);

  // Self loops are ignored and duplicates collapsed.
  void add_edge(std::size_t u, std::size_t v);

  std::size_t node_count() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edges_; }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_.at(v); }

 private:
  std::vector<std::vector<std::size_t>> adjacency_;
  std::size_t edges_ = 0;
};

// Zachary's karate club (34 members, 78 ties), 0-based.
Graph karate_club();

double influence_eval(const Graph& graph, const Subset& s);

class InfluenceObjective final : public SetOracle {
 public:
  explicit InfluenceObjective(std::shared_ptr<const Graph> graph);

  double value(const Subset& s) const override;

 private:
  std::shared_ptr<const Graph> graph_;
};

// ---------------------------------------------------------------------------
// Multilinear extension F(x) = E_{S~x} f(S).

inline constexpr std::size_t kMaxEnumerationDim = 25;

// Exact expectation by enumerating all 2^d subsets through value() (uncounted).
// Throws CapacityError for d > 25.
double multilinear_exact(const SetOracle& f, const Point& x);

// Draws S ~ x: element i joins independently with probability x_i.
Subset sample_subset(const Point& x, Rng& rng);

// Mean of `samples` counted evaluations f(S), S ~ x.
double multilinear_sample(SetOracle& f, const Point& x, std::size_t samples, Rng& rng);

// ---------------------------------------------------------------------------
// Generic oracles built from callables; mostly useful for tests and the C API.

class FunctionObjective final : public ValueOracle {
 public:
  using Fn = std::function<double(const Point&)>;
  using GradFn = std::function<Point(const Point&)>;

  FunctionObjective(BoxDomain domain, double lipschitz, Fn fn, GradFn grad = nullptr);

  double value(const Point& x) const override { return fn_(x); }
  bool has_gradient() const override { return static_cast<bool>(grad_); }
  Point gradient(const Point& x) const override;

 private:
  Fn fn_;
  GradFn grad_;
};

class FunctionSetObjective final : public SetOracle {
 public:
  using Fn = std::function<double(const Subset&)>;

  FunctionSetObjective(std::size_t ground_size, double bound, Fn fn);

  double value(const Subset& s) const override { return fn_(s); }

 private:
  Fn fn_;
};

// F(x) + xi with xi ~ N(0, sigma0^2) drawn per query. Not thread-safe: the
// generator is owned by the instance.
class NoisyOracle final : public ValueOracle {
 public:
  NoisyOracle(std::shared_ptr<ValueOracle> inner, double sigma0, std::uint64_t seed);

  double value(const Point& x) const override { return inner_->value(x); }
  bool has_gradient() const override { return inner_->has_gradient(); }
  Point gradient(const Point& x) const override { return inner_->gradient(x); }
  double sigma0() const { return sigma0_; }

 protected:
  double sample(const Point& x) override;

 private:
  std::shared_ptr<ValueOracle> inner_;
  double sigma0_;
  Rng rng_;
  std::normal_distribution<double> noise_{0.0, 1.0};
};

std::unique_ptr<NoisyOracle> noisy_wrap(std::shared_ptr<ValueOracle> inner, double sigma0,
                                        std::uint64_t seed);

}  // namespace bbg
