#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bbg/core.hpp"
#include "bbg/objectives.hpp"
#include "bbg/polytope.hpp"

namespace bbg {

struct AlgoParams {
  std::size_t iterations = 100;  // T, at least 4
  double delta = 0.05;           // smoothing radius
  std::size_t batch = 1;         // B: sphere directions per iteration
  std::size_t samples = 1;       // l: sampled sets per smoothed point (discrete only)
  std::uint64_t seed = 0;
  double step0 = 0.0;            // GA/ZGA: eta_t = step0 / sqrt(t); 0 picks diam(K) / G
  std::size_t value_samples = 64;  // instrumentation only, never counted as queries

  void validate() const;
};

struct TraceRecord {
  std::size_t iteration = 0;
  std::uint64_t queries = 0;  // cumulative oracle queries after this iteration
  double elapsed_ms = 0.0;
  Point iterate;              // lifted iterate after this iteration
  double value = 0.0;         // objective at `iterate`
  double momentum_norm = 0.0;
};

struct RunTrace {
  std::vector<TraceRecord> records;

  std::uint64_t total_queries() const { return records.empty() ? 0 : records.back().queries; }
  double elapsed_ms() const { return records.empty() ? 0.0 : records.back().elapsed_ms; }
};

struct ContinuousResult {
  Point solution;
  RunTrace trace;
};

struct DiscreteResult {
  Subset solution;
  Point fractional;              // point handed to the rounding step
  double rounding_violation = 0.0;  // how far it sat outside the matroid polytope before repair
  RunTrace trace;
};

// Black-box continuous greedy. Queries: exactly 2 * B * T.
ContinuousResult bcg(ValueOracle& f, const BoxDomain& domain, const ConstraintSpec& constraint,
                     const AlgoParams& params);

// Discrete black-box greedy on [0,1]^d under a partition matroid.
// Queries: exactly 2 * B * l * T set evaluations.
DiscreteResult dbg(SetOracle& f, const ConstraintSpec& matroid, const AlgoParams& params);

// Stochastic continuous greedy with the exact gradient (no value queries).
ContinuousResult scg(ValueOracle& f, const ConstraintSpec& constraint, const AlgoParams& params);

// Stochastic continuous greedy with the sampled partial-derivative estimator
// f(S ∪ {i}) - f(S \ {i}), S ~ x. Queries: exactly 2 * d * T.
DiscreteResult scg(SetOracle& f, const ConstraintSpec& matroid, const AlgoParams& params);

// Projected gradient ascent with the exact gradient.
ContinuousResult ga(ValueOracle& f, const ConstraintSpec& constraint, const AlgoParams& params);

// Projected gradient ascent with the sampled partial-derivative estimator,
// rounded at the end. Queries: exactly 2 * d * T.
DiscreteResult ga(SetOracle& f, const ConstraintSpec& matroid, const AlgoParams& params);

// Projected gradient ascent with the two-point estimator on K'.
// Queries: exactly 2 * B * T.
ContinuousResult zga(ValueOracle& f, const BoxDomain& domain, const ConstraintSpec& constraint,
                     const AlgoParams& params);

// Discrete zeroth-order gradient ascent. Queries: exactly 2 * B * l * T.
DiscreteResult zga(SetOracle& f, const ConstraintSpec& matroid, const AlgoParams& params);

// Upper bound on diam(P) for a polytope containing 0 inside the nonnegative orthant.
double diameter_bound(const BudgetPolytope& polytope);

// Per-coordinate estimate of dF/dx_i from one sampled S ~ x (2d queries).
Point sampled_partial_gradient(SetOracle& f, const Point& x, Rng& rng);

}  // namespace bbg
