#include "bbg/objectives.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include <Eigen/Cholesky>
#include <fmt/format.h>

#include "bbg/error.hpp"

namespace bbg {

ValueOracle::ValueOracle(BoxDomain domain, double lipschitz)
    : domain_(std::move(domain)), lipschitz_(lipschitz) {
  if (!(lipschitz_ >= 0.0) || !std::isfinite(lipschitz_)) {
    throw ArgumentError(fmt::format("Lipschitz constant {} must be nonnegative", lipschitz_));
  }
}

double ValueOracle::eval(const Point& x) {
  require_dim(x, dim(), "ValueOracle::eval");
  if (!domain_.contains(x)) {
    throw DomainError("oracle queried outside its domain");
  }
  queries_.fetch_add(1, std::memory_order_relaxed);
  return sample(x);
}

Point ValueOracle::gradient(const Point& /*x*/) const {
  throw ArgumentError("objective has no first-order oracle");
}

SetOracle::SetOracle(std::size_t ground_size, double bound) : ground_size_(ground_size), bound_(bound) {
  if (ground_size_ == 0) throw ArgumentError("ground set must be nonempty");
  if (!(bound_ > 0.0) || !std::isfinite(bound_)) {
    throw ArgumentError(fmt::format("set function bound {} must be positive", bound_));
  }
}

double SetOracle::eval_set(const Subset& s) {
  check_subset(s);
  queries_.fetch_add(1, std::memory_order_relaxed);
  return value(s);
}

void SetOracle::check_subset(const Subset& s) const {
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] >= ground_size_) {
      throw ArgumentError(fmt::format("element {} outside ground set of size {}", s[k], ground_size_));
    }
    if (k > 0 && s[k] <= s[k - 1]) throw ArgumentError("subset must be sorted without repeats");
  }
}

// ---------------------------------------------------------------------------

QuadraticInstance nqp_generate(std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw ArgumentError("NQP dimension must be positive");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix h(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) h(i, j) = -std::abs(normal(rng));
  }
  Matrix sym = 0.5 * (h + h.transpose());
  Point b = -(sym.transpose() * Point::Ones(d));
  return QuadraticInstance{std::move(sym), std::move(b)};
}

double nqp_eval(const Matrix& hessian, const Point& linear, const Point& x) {
  if (hessian.rows() != hessian.cols() || hessian.rows() != linear.size()) {
    throw ArgumentError("NQP matrix and vector dimensions disagree");
  }
  require_dim(x, static_cast<std::size_t>(linear.size()), "nqp_eval");
  return 0.5 * x.dot(hessian * x) + linear.dot(x);
}

QuadraticObjective::QuadraticObjective(QuadraticInstance instance)
    : ValueOracle(BoxDomain::unit(static_cast<std::size_t>(instance.linear.size())),
                  std::max(instance.linear.norm(), 1e-12)),
      instance_(std::move(instance)) {}

double QuadraticObjective::value(const Point& x) const {
  return nqp_eval(instance_.hessian, instance_.linear, x);
}

Point QuadraticObjective::gradient(const Point& x) const {
  require_dim(x, dim(), "QuadraticObjective::gradient");
  return instance_.hessian * x + instance_.linear;
}

// ---------------------------------------------------------------------------

void validate_probability_matrix(const Matrix& m, const char* what) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double p = m(i, j);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ArgumentError(fmt::format("{}: entry ({}, {}) = {} is outside [0, 1]", what, i, j, p));
      }
    }
  }
}

double coverage_eval(const Matrix& topics, const Point& x) {
  require_dim(x, static_cast<std::size_t>(topics.cols()), "coverage_eval");
  // Iterates built from 1/T steps can overshoot a face by a few ulps.
  for (Eigen::Index a = 0; a < x.size(); ++a) {
    if (!(x[a] >= -kDefaultFeasibilityTol && x[a] <= 1.0 + kDefaultFeasibilityTol)) {
      throw ArgumentError(fmt::format("coverage_eval: x_{} = {} is outside [0, 1]", a, x[a]));
    }
  }
  const Point p = x.cwiseMax(0.0).cwiseMin(1.0);
  double total = 0.0;
  for (Eigen::Index j = 0; j < topics.rows(); ++j) {
    double missed = 1.0;
    for (Eigen::Index a = 0; a < topics.cols(); ++a) missed *= 1.0 - topics(j, a) * p[a];
    total += 1.0 - missed;
  }
  return total / static_cast<double>(topics.rows());
}

double coverage_set_eval(const Matrix& topics, const Subset& s) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < topics.rows(); ++j) {
    double missed = 1.0;
    for (std::size_t a : s) missed *= 1.0 - topics(j, static_cast<Eigen::Index>(a));
    total += 1.0 - missed;
  }
  return total / static_cast<double>(topics.rows());
}

namespace {

double coverage_lipschitz(const Matrix& topics) {
  // |dF/dx_a| <= mean_j p_a(j) everywhere on the unit box.
  return std::max(topics.colwise().mean().norm(), 1e-12);
}

std::shared_ptr<const Matrix> checked_topics(std::shared_ptr<const Matrix> topics) {
  if (!topics || topics->rows() == 0 || topics->cols() == 0) {
    throw ArgumentError("topic matrix must be nonempty");
  }
  validate_probability_matrix(*topics, "topic matrix");
  return topics;
}

}  // namespace

CoverageObjective::CoverageObjective(std::shared_ptr<const Matrix> topics)
    : ValueOracle(BoxDomain::unit(static_cast<std::size_t>(checked_topics(topics)->cols())),
                  coverage_lipschitz(*topics)),
      topics_(std::move(topics)) {}

double CoverageObjective::value(const Point& x) const { return coverage_eval(*topics_, x); }

Point CoverageObjective::gradient(const Point& x) const {
  require_dim(x, dim(), "CoverageObjective::gradient");
  const Matrix& p = *topics_;
  const Eigen::Index d = p.cols();
  Point grad = Point::Zero(d);
  std::vector<double> prefix(static_cast<std::size_t>(d) + 1);
  for (Eigen::Index j = 0; j < p.rows(); ++j) {
    prefix[0] = 1.0;
    for (Eigen::Index a = 0; a < d; ++a) {
      prefix[static_cast<std::size_t>(a) + 1] = prefix[static_cast<std::size_t>(a)] * (1.0 - p(j, a) * x[a]);
    }
    double suffix = 1.0;
    for (Eigen::Index a = d - 1; a >= 0; --a) {
      grad[a] += p(j, a) * prefix[static_cast<std::size_t>(a)] * suffix;
      suffix *= 1.0 - p(j, a) * x[a];
    }
  }
  return grad / static_cast<double>(p.rows());
}

CoverageSetObjective::CoverageSetObjective(std::shared_ptr<const Matrix> topics)
    : SetOracle(static_cast<std::size_t>(checked_topics(topics)->cols()), 1.0),
      topics_(std::move(topics)) {}

double CoverageSetObjective::value(const Subset& s) const {
  check_subset(s);
  return coverage_set_eval(*topics_, s);
}

std::optional<double> CoverageSetObjective::multilinear(const Point& x) const {
  return coverage_eval(*topics_, x);
}

Matrix synthesize_topics(std::size_t topics, std::size_t articles, std::uint64_t seed) {
  if (topics == 0 || articles == 0) throw ArgumentError("topic matrix dimensions must be positive");
  Rng rng(seed);
  std::exponential_distribution<double> gamma_one(1.0);  // Gamma(1, 1)
  Matrix p(static_cast<Eigen::Index>(topics), static_cast<Eigen::Index>(articles));
  for (Eigen::Index a = 0; a < p.cols(); ++a) {
    for (Eigen::Index j = 0; j < p.rows(); ++j) p(j, a) = gamma_one(rng);
    p.col(a) /= p.col(a).sum();
  }
  return p;
}

// ---------------------------------------------------------------------------

double logdet_eval(const Matrix& covariance, const Subset& s) {
  if (s.empty()) return 0.0;
  const auto k = static_cast<Eigen::Index>(s.size());
  Matrix sub(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) {
      sub(r, c) = covariance(static_cast<Eigen::Index>(s[static_cast<std::size_t>(r)]),
                             static_cast<Eigen::Index>(s[static_cast<std::size_t>(c)]));
    }
  }
  sub.diagonal().array() += 1.0;
  Eigen::LLT<Matrix> llt(sub);
  if (llt.info() != Eigen::Success) {
    throw NumericError("I + Sigma_SS is not positive definite; covariance is not PSD");
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

Matrix rbf_covariance(const Matrix& data, double bandwidth) {
  if (!(bandwidth > 0.0)) throw ArgumentError("RBF bandwidth must be positive");
  const Eigen::Index d = data.cols();
  Matrix sigma(d, d);
  const double h2 = bandwidth * bandwidth;
  for (Eigen::Index i = 0; i < d; ++i) {
    sigma(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double dist2 = (data.col(i) - data.col(j)).squaredNorm();
      sigma(i, j) = sigma(j, i) = std::exp(-dist2 / h2);
    }
  }
  return sigma;
}

namespace {

double full_logdet(const std::shared_ptr<const Matrix>& covariance) {
  if (!covariance || covariance->rows() == 0 || covariance->rows() != covariance->cols()) {
    throw ArgumentError("covariance must be a nonempty square matrix");
  }
  Subset all(static_cast<std::size_t>(covariance->rows()));
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return std::max(logdet_eval(*covariance, all), 1e-12);
}

}  // namespace

LogDetObjective::LogDetObjective(std::shared_ptr<const Matrix> covariance)
    : SetOracle(static_cast<std::size_t>(covariance ? covariance->rows() : 0), full_logdet(covariance)),
      covariance_(std::move(covariance)) {}

double LogDetObjective::value(const Subset& s) const {
  check_subset(s);
  return logdet_eval(*covariance_, s);
}

Matrix synthesize_data(std::size_t rows, std::size_t columns, std::uint64_t seed) {
  if (rows == 0 || columns == 0) throw ArgumentError("data matrix dimensions must be positive");
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t groups = std::max<std::size_t>(1, columns / 4);
  std::uniform_int_distribution<std::size_t> pick(0, groups - 1);
  const Eigen::Index n = static_cast<Eigen::Index>(rows);
  Matrix latent(n, static_cast<Eigen::Index>(groups));
  for (Eigen::Index g = 0; g < latent.cols(); ++g) {
    for (Eigen::Index r = 0; r < n; ++r) latent(r, g) = normal(rng);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(rows));
  Matrix x(n, static_cast<Eigen::Index>(columns));
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const Eigen::Index g = static_cast<Eigen::Index>(pick(rng));
    for (Eigen::Index r = 0; r < n; ++r) x(r, c) = scale * (latent(r, g) + 0.5 * normal(rng));
  }
  return x;
}

// ---------------------------------------------------------------------------

Graph::Graph(std::size_t nodes) : adjacency_(nodes) {}

void Graph::add_edge(std::size_t u, std::size_t v) {
  if (u >= adjacency_.size() || v >= adjacency_.size()) {
    throw ArgumentError(fmt::format("edge ({}, {}) references a node outside 0..{}", u, v,
                                    adjacency_.size()));
  }
  if (u == v) return;
  auto& nu = adjacency_[u];
  auto it = std::lower_bound(nu.begin(), nu.end(), v);
  if (it != nu.end() && *it == v) return;
  nu.insert(it, v);
  auto& nv = adjacency_[v];
  nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
  ++edges_;
}

Graph karate_club() {
  static constexpr std::array<std::pair<int, int>, 78> kEdges{{
      {0, 1},   {0, 2},   {0, 3},   {0, 4},   {0, 5},   {0, 6},   {0, 7},   {0, 8},   {0, 10},
      {0, 11},  {0, 12},  {0, 13},  {0, 17},  {0, 19},  {0, 21},  {0, 31},  {1, 2},   {1, 3},
      {1, 7},   {1, 13},  {1, 17},  {1, 19},  {1, 21},  {1, 30},  {2, 3},   {2, 7},   {2, 8},
      {2, 9},   {2, 13},  {2, 27},  {2, 28},  {2, 32},  {3, 7},   {3, 12},  {3, 13},  {4, 6},
      {4, 10},  {5, 6},   {5, 10},  {5, 16},  {6, 16},  {8, 30},  {8, 32},  {8, 33},  {9, 33},
      {13, 33}, {14, 32}, {14, 33}, {15, 32}, {15, 33}, {18, 32}, {18, 33}, {19, 33}, {20, 32},
      {20, 33}, {22, 32}, {22, 33}, {23, 25}, {23, 27}, {23, 29}, {23, 32}, {23, 33}, {24, 25},
      {24, 27}, {24, 31}, {25, 31}, {26, 29}, {26, 33}, {27, 33}, {28, 31}, {28, 33}, {29, 32},
      {29, 33}, {30, 32}, {30, 33}, {31, 32}, {31, 33}, {32, 33},
  }};
  Graph g(34);
  for (auto [u, v] : kEdges) g.add_edge(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
  return g;
}

double influence_eval(const Graph& graph, const Subset& s) {
  std::vector<bool> reached(graph.node_count(), false);
  std::size_t count = 0;
  auto mark = [&](std::size_t v) {
    if (!reached[v]) {
      reached[v] = true;
      ++count;
    }
  };
  for (std::size_t v : s) {
    if (v >= graph.node_count()) {
      throw ArgumentError(fmt::format("node {} outside graph of {} nodes", v, graph.node_count()));
    }
    mark(v);
    for (std::size_t w : graph.neighbors(v)) mark(w);
  }
  return static_cast<double>(count);
}

InfluenceObjective::InfluenceObjective(std::shared_ptr<const Graph> graph)
    : SetOracle(graph ? graph->node_count() : 0,
                graph ? static_cast<double>(graph->node_count()) : 1.0),
      graph_(std::move(graph)) {}

double InfluenceObjective::value(const Subset& s) const { return influence_eval(*graph_, s); }

// ---------------------------------------------------------------------------

double multilinear_exact(const SetOracle& f, const Point& x) {
  const std::size_t d = f.ground_size();
  require_dim(x, d, "multilinear_exact");
  if (d > kMaxEnumerationDim) {
    throw CapacityError(
        fmt::format("exact multilinear extension needs 2^{} evaluations (limit d <= {})", d,
                    kMaxEnumerationDim));
  }
  double total = 0.0;
  Subset s;
  s.reserve(d);
  const std::uint64_t count = std::uint64_t{1} << d;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    double prob = 1.0;
    s.clear();
    for (std::size_t i = 0; i < d && prob != 0.0; ++i) {
      const double xi = x[static_cast<Eigen::Index>(i)];
      if (mask & (std::uint64_t{1} << i)) {
        prob *= xi;
        s.push_back(i);
      } else {
        prob *= 1.0 - xi;
      }
    }
    if (prob != 0.0) total += prob * f.value(s);
  }
  return total;
}

Subset sample_subset(const Point& x, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Subset s;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (unif(rng) < x[i]) s.push_back(static_cast<std::size_t>(i));
  }
  return s;
}

double multilinear_sample(SetOracle& f, const Point& x, std::size_t samples, Rng& rng) {
  require_dim(x, f.ground_size(), "multilinear_sample");
  if (samples == 0) throw ArgumentError("multilinear_sample needs at least one sample");
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (!(x[i] >= -kDefaultFeasibilityTol && x[i] <= 1.0 + kDefaultFeasibilityTol)) {
      throw DomainError(fmt::format("sampling probability x_{} = {} outside [0, 1]", i, x[i]));
    }
  }
  double total = 0.0;
  for (std::size_t j = 0; j < samples; ++j) total += f.eval_set(sample_subset(x, rng));
  return total / static_cast<double>(samples);
}

// ---------------------------------------------------------------------------

FunctionObjective::FunctionObjective(BoxDomain domain, double lipschitz, Fn fn, GradFn grad)
    : ValueOracle(std::move(domain), lipschitz), fn_(std::move(fn)), grad_(std::move(grad)) {
  if (!fn_) throw ArgumentError("FunctionObjective needs a callable");
}

Point FunctionObjective::gradient(const Point& x) const {
  if (!grad_) return ValueOracle::gradient(x);
  return grad_(x);
}

FunctionSetObjective::FunctionSetObjective(std::size_t ground_size, double bound, Fn fn)
    : SetOracle(ground_size, bound), fn_(std::move(fn)) {
  if (!fn_) throw ArgumentError("FunctionSetObjective needs a callable");
}

NoisyOracle::NoisyOracle(std::shared_ptr<ValueOracle> inner, double sigma0, std::uint64_t seed)
    : ValueOracle(inner ? inner->domain() : BoxDomain::unit(1), inner ? inner->lipschitz() : 1.0),
      inner_(std::move(inner)),
      sigma0_(sigma0),
      rng_(seed) {
  if (!inner_) throw ArgumentError("noisy oracle needs an inner oracle");
  if (!(sigma0_ >= 0.0)) throw ArgumentError("noise level must be nonnegative");
}

double NoisyOracle::sample(const Point& x) {
  const double clean = inner_->value(x);
  if (sigma0_ == 0.0) return clean;
  return clean + sigma0_ * noise_(rng_);
}

std::unique_ptr<NoisyOracle> noisy_wrap(std::shared_ptr<ValueOracle> inner, double sigma0,
                                        std::uint64_t seed) {
  return std::make_unique<NoisyOracle>(std::move(inner), sigma0, seed);
}

}  // namespace bbg
