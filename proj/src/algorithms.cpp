#include "bbg/algorithms.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <utility>

#include <fmt/format.h>

#include "bbg/error.hpp"
#include "bbg/estimators.hpp"
#include "bbg/random.hpp"

namespace bbg {

void AlgoParams::validate() const {
  if (iterations < 4) throw ArgumentError(fmt::format("iterations = {} must be at least 4", iterations));
  if (!(delta > 0.0)) throw ArgumentError(fmt::format("delta = {} must be positive", delta));
  if (batch == 0) throw ArgumentError("batch size must be positive");
  if (samples == 0) throw ArgumentError("sample size must be positive");
  if (!(step0 >= 0.0)) throw ArgumentError(fmt::format("step0 = {} must be nonnegative", step0));
  if (value_samples == 0) throw ArgumentError("value_samples must be positive");
}

namespace {

// Independent generator lanes derived from the run seed.
enum Stream : std::uint64_t { kEstimator = 0, kInstrument = 1, kRounding = 2 };

// Wall-clock accounting that excludes instrumentation work.
class Stopwatch {
 public:
  Stopwatch() : start_(Clock::now()) {}
  void pause() {
    total_ += Clock::now() - start_;
  }
  void resume() { start_ = Clock::now(); }
  double elapsed_ms() const { return std::chrono::duration<double, std::milli>(total_).count(); }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_;
  Clock::duration total_{0};
};

class Recorder {
 public:
  Recorder(RunTrace& trace, std::function<double(const Point&)> value, std::function<std::uint64_t()> queries)
      : trace_(trace), value_(std::move(value)), queries_(std::move(queries)), base_(queries_()) {}

  void record(std::size_t t, const Point& lifted, double momentum_norm) {
    clock_.pause();
    TraceRecord rec;
    rec.iteration = t;
    rec.queries = queries_() - base_;
    rec.elapsed_ms = clock_.elapsed_ms();
    rec.iterate = lifted;
    rec.value = value_(lifted);
    rec.momentum_norm = momentum_norm;
    trace_.records.push_back(std::move(rec));
    clock_.resume();
  }

 private:
  RunTrace& trace_;
  std::function<double(const Point&)> value_;
  std::function<std::uint64_t()> queries_;
  std::uint64_t base_;
  Stopwatch clock_;
};

Recorder continuous_recorder(RunTrace& trace, const ValueOracle& f) {
  return Recorder(
      trace, [&f](const Point& x) { return f.value(x); }, [&f] { return f.query_count(); });
}

Recorder discrete_recorder(RunTrace& trace, const SetOracle& f, const AlgoParams& params) {
  auto rng = std::make_shared<Rng>(make_rng(params.seed, kInstrument));
  const std::size_t samples = params.value_samples;
  auto value = [&f, rng, samples](const Point& x) {
    if (auto closed = f.multilinear(x)) return *closed;
    const Point p = x.cwiseMax(0.0).cwiseMin(1.0);
    double total = 0.0;
    for (std::size_t j = 0; j < samples; ++j) total += f.value(sample_subset(p, *rng));
    return total / static_cast<double>(samples);
  };
  return Recorder(trace, std::move(value), [&f] { return f.query_count(); });
}

void require_matroid_for(const ConstraintSpec& matroid, const SetOracle& f, const char* algo) {
  if (matroid.kind() != ConstraintKind::PartitionMatroid) {
    throw ArgumentError(fmt::format("{} needs a partition-matroid constraint", algo));
  }
  if (matroid.dim() != f.ground_size()) {
    throw ArgumentError(fmt::format("{}: constraint dimension {} but ground set size {}", algo,
                                    matroid.dim(), f.ground_size()));
  }
}

void require_inside(const BoxDomain& domain, const ValueOracle& f, const ConstraintSpec& constraint) {
  if (domain.dim() != f.dim() || constraint.dim() != f.dim()) {
    throw ArgumentError(fmt::format("dimension mismatch: domain {}, oracle {}, constraint {}",
                                    domain.dim(), f.dim(), constraint.dim()));
  }
  if ((domain.upper().array() > f.domain().upper().array()).any()) {
    throw ArgumentError("domain extends beyond the oracle's domain");
  }
}

void assert_feasible(const ConstraintSpec& constraint, const Point& x, const char* algo) {
  const double violation = max_violation(constraint.polytope(), x);
  if (violation > kDefaultFeasibilityTol) {
    throw InfeasibleError(fmt::format("{} produced a point outside K (violation {})", algo, violation));
  }
}

double step_scale(const AlgoParams& params, const BudgetPolytope& polytope, double lipschitz) {
  if (params.step0 > 0.0) return params.step0;
  // G = 0 means a constant objective; any step is as good as another.
  return diameter_bound(polytope) / (lipschitz > 0.0 ? lipschitz : 1.0);
}

DiscreteResult round_output(const ConstraintSpec& matroid, const Point& lifted,
                            const AlgoParams& params, RunTrace trace) {
  DiscreteResult out;
  out.fractional = repair_for_rounding(lifted, matroid, &out.rounding_violation);
  Rng rng = make_rng(params.seed, kRounding);
  out.solution = swap_round(out.fractional, matroid, rng);
  out.trace = std::move(trace);
  return out;
}

}  // namespace

double diameter_bound(const BudgetPolytope& polytope) {
  double radius2 = 0.0;
  std::vector<bool> owned(polytope.dim(), false);
  for (const Block& block : polytope.blocks) {
    std::vector<double> caps;
    for (std::size_t i : block.indices) {
      owned[i] = true;
      caps.push_back(polytope.upper[static_cast<Eigen::Index>(i)]);
    }
    std::sort(caps.rbegin(), caps.rend());
    double remaining = block.budget;
    for (double cap : caps) {
      const double take = std::min(cap, remaining);
      radius2 += take * take;
      remaining -= take;
      if (remaining <= 0.0) break;
    }
  }
  for (std::size_t i = 0; i < owned.size(); ++i) {
    if (!owned[i]) radius2 += std::pow(polytope.upper[static_cast<Eigen::Index>(i)], 2);
  }
  // x, y >= 0 gives ||x - y||^2 <= ||x||^2 + ||y||^2.
  return std::max(std::min(polytope.upper.norm(), std::sqrt(2.0 * radius2)), 1e-12);
}

Point sampled_partial_gradient(SetOracle& f, const Point& x, Rng& rng) {
  const std::size_t d = f.ground_size();
  require_dim(x, d, "sampled_partial_gradient");
  const Subset s = sample_subset(x.cwiseMax(0.0).cwiseMin(1.0), rng);
  std::vector<bool> member(d, false);
  for (std::size_t i : s) member[i] = true;

  Point g(static_cast<Eigen::Index>(d));
  Subset with;
  Subset without;
  for (std::size_t i = 0; i < d; ++i) {
    with.clear();
    without.clear();
    for (std::size_t k = 0; k < d; ++k) {
      const bool in = member[k] || k == i;
      if (in) with.push_back(k);
      if (member[k] && k != i) without.push_back(k);
    }
    g[static_cast<Eigen::Index>(i)] = f.eval_set(with) - f.eval_set(without);
  }
  return g;
}

ContinuousResult bcg(ValueOracle& f, const BoxDomain& domain, const ConstraintSpec& constraint,
                     const AlgoParams& params) {
  params.validate();
  require_inside(domain, f, constraint);
  const TransformedConstraint shrunk = transform_constraint(domain, constraint, params.delta);
  const std::size_t d = f.dim();
  const double step = 1.0 / static_cast<double>(params.iterations);

  ContinuousResult out;
  Recorder recorder = continuous_recorder(out.trace, f);
  Rng rng = make_rng(params.seed, kEstimator);
  Point x = Point::Zero(static_cast<Eigen::Index>(d));
  MomentumState momentum = MomentumState::zero(d);
  for (std::size_t t = 1; t <= params.iterations; ++t) {
    const GradientSample g = batch_grad(f, x, params.delta, params.batch, rng);
    momentum = momentum_update(momentum, g.estimate, rho_schedule(t));
    x += step * lmo(shrunk, momentum.g_bar);
    recorder.record(t, x.array() + params.delta, momentum.g_bar.norm());
  }
  out.solution = x.array() + params.delta;
  assert_feasible(constraint, out.solution, "bcg");
  return out;
}

DiscreteResult dbg(SetOracle& f, const ConstraintSpec& matroid, const AlgoParams& params) {
  params.validate();
  require_matroid_for(matroid, f, "dbg");
  const std::size_t d = f.ground_size();
  const TransformedConstraint shrunk = transform_constraint(BoxDomain::unit(d), matroid, params.delta);
  const double step = 1.0 / static_cast<double>(params.iterations);

  RunTrace trace;
  Recorder recorder = discrete_recorder(trace, f, params);
  Rng rng = make_rng(params.seed, kEstimator);
  Point x = Point::Zero(static_cast<Eigen::Index>(d));
  MomentumState momentum = MomentumState::zero(d);
  for (std::size_t t = 1; t <= params.iterations; ++t) {
    const GradientSample g =
        discrete_batch_grad(f, x, params.delta, params.batch, params.samples, rng);
    momentum = momentum_update(momentum, g.estimate, rho_schedule(t));
    x += step * lmo(shrunk, momentum.g_bar);
    recorder.record(t, x.array() + params.delta, momentum.g_bar.norm());
  }
  return round_output(matroid, x.array() + params.delta, params, std::move(trace));
}

ContinuousResult scg(ValueOracle& f, const ConstraintSpec& constraint, const AlgoParams& params) {
  params.validate();
  require_inside(f.domain(), f, constraint);
  const std::size_t d = f.dim();
  const double step = 1.0 / static_cast<double>(params.iterations);

  ContinuousResult out;
  Recorder recorder = continuous_recorder(out.trace, f);
  Point x = Point::Zero(static_cast<Eigen::Index>(d));
  MomentumState momentum = MomentumState::zero(d);
  for (std::size_t t = 1; t <= params.iterations; ++t) {
    momentum = momentum_update(momentum, f.gradient(x), rho_schedule(t));
    x += step * lmo(constraint, momentum.g_bar);
    recorder.record(t, x, momentum.g_bar.norm());
  }
  out.solution = x;
  assert_feasible(constraint, out.solution, "scg");
  return out;
}

DiscreteResult scg(SetOracle& f, const ConstraintSpec& matroid, const AlgoParams& params) {
  params.validate();
  require_matroid_for(matroid, f, "scg");
  const std::size_t d = f.ground_size();
  const double step = 1.0 / static_cast<double>(params.iterations);

  RunTrace trace;
  Recorder recorder = discrete_recorder(trace, f, params);
  Rng rng = make_rng(params.seed, kEstimator);
  Point x = Point::Zero(static_cast<Eigen::Index>(d));
  MomentumState momentum = MomentumState::zero(d);
  for (std::size_t t = 1; t <= params.iterations; ++t) {
    momentum = momentum_update(momentum, sampled_partial_gradient(f, x, rng), rho_schedule(t));
    x += step * lmo(matroid, momentum.g_bar);
    recorder.record(t, x, momentum.g_bar.norm());
  }
  return round_output(matroid, x, params, std::move(trace));
}

ContinuousResult ga(ValueOracle& f, const ConstraintSpec& constraint, const AlgoParams& params) {
  params.validate();
  require_inside(f.domain(), f, constraint);
  const double eta0 = step_scale(params, constraint.polytope(), f.lipschitz());

  ContinuousResult out;
  Recorder recorder = continuous_recorder(out.trace, f);
  Point x = Point::Zero(static_cast<Eigen::Index>(f.dim()));
  for (std::size_t t = 1; t <= params.iterations; ++t) {
    const Point g = f.gradient(x);
    x = project(constraint, x + (eta0 / std::sqrt(static_cast<double>(t))) * g);
    recorder.record(t, x, g.norm());
  }
  out.solution = x;
  assert_feasible(constraint, out.solution, "ga");
  return out;
}

DiscreteResult ga(SetOracle& f, const ConstraintSpec& matroid, const AlgoParams& params) {
  params.validate();
  require_matroid_for(matroid, f, "ga");
  const std::size_t d = f.ground_size();
  const double lipschitz = 2.0 * f.bound() * std::sqrt(static_cast<double>(d));
  const double eta0 = step_scale(params, matroid.polytope(), lipschitz);

  RunTrace trace;
  Recorder recorder = discrete_recorder(trace, f, params);
  Rng rng = make_rng(params.seed, kEstimator);
  Point x = Point::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t t = 1; t <= params.iterations; ++t) {
    const Point g = sampled_partial_gradient(f, x, rng);
    x = project(matroid, x + (eta0 / std::sqrt(static_cast<double>(t))) * g);
    recorder.record(t, x, g.norm());
  }
  return round_output(matroid, x, params, std::move(trace));
}

ContinuousResult zga(ValueOracle& f, const BoxDomain& domain, const ConstraintSpec& constraint,
                     const AlgoParams& params) {
  params.validate();
  require_inside(domain, f, constraint);
  const TransformedConstraint shrunk = transform_constraint(domain, constraint, params.delta);
  const double eta0 = step_scale(params, shrunk.polytope(), f.lipschitz());

  ContinuousResult out;
  Recorder recorder = continuous_recorder(out.trace, f);
  Rng rng = make_rng(params.seed, kEstimator);
  Point x = Point::Zero(static_cast<Eigen::Index>(f.dim()));
  for (std::size_t t = 1; t <= params.iterations; ++t) {
    const GradientSample g = batch_grad(f, x, params.delta, params.batch, rng);
    x = project(shrunk.polytope(), x + (eta0 / std::sqrt(static_cast<double>(t))) * g.estimate);
    recorder.record(t, x.array() + params.delta, g.estimate.norm());
  }
  out.solution = x.array() + params.delta;
  assert_feasible(constraint, out.solution, "zga");
  return out;
}

DiscreteResult zga(SetOracle& f, const ConstraintSpec& matroid, const AlgoParams& params) {
  params.validate();
  require_matroid_for(matroid, f, "zga");
  const std::size_t d = f.ground_size();
  const TransformedConstraint shrunk = transform_constraint(BoxDomain::unit(d), matroid, params.delta);
  const double lipschitz = 2.0 * f.bound() * std::sqrt(static_cast<double>(d));
  const double eta0 = step_scale(params, shrunk.polytope(), lipschitz);

  RunTrace trace;
  Recorder recorder = discrete_recorder(trace, f, params);
  Rng rng = make_rng(params.seed, kEstimator);
  Point x = Point::Zero(static_cast<Eigen::Index>(d));
  for (std::size_t t = 1; t <= params.iterations; ++t) {
    const GradientSample g =
        discrete_batch_grad(f, x, params.delta, params.batch, params.samples, rng);
    x = project(shrunk.polytope(), x + (eta0 / std::sqrt(static_cast<double>(t))) * g.estimate);
    recorder.record(t, x.array() + params.delta, g.estimate.norm());
  }
  return round_output(matroid, x.array() + params.delta, params, std::move(trace));
}

}  // namespace bbg
