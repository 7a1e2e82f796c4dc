#pragma once

#include <cstddef>
#include <cstdint>

#include "bbg/core.hpp"
#include "bbg/objectives.hpp"
#include "bbg/random.hpp"

namespace bbg {

// Uniform on the unit sphere S^{d-1} (normalized standard Gaussian).
Point sample_sphere(std::size_t dim, Rng& rng);

// Uniform in the unit ball B^d (sphere sample scaled by U^{1/d}).
Point sample_ball(std::size_t dim, Rng& rng);

// (d / delta) F(x + delta u) u. One query.
Point one_point_grad(ValueOracle& f, const Point& x, double delta, const Point& u);

// (d / 2 delta) (F(x + delta u) - F(x - delta u)) u. Two queries.
Point two_point_grad(ValueOracle& f, const Point& x, double delta, const Point& u);

struct GradientSample {
  Point estimate;
  std::uint64_t queries_used = 0;
  Point center;  // z_t = delta*1 + x_t
};

// Mean of `batch` two-point estimates centred at delta*1 + x. x must lie in
// the translated shrunk box prod [0, a_i - 2 delta].
GradientSample batch_grad(ValueOracle& f, const Point& x, double delta, std::size_t batch, Rng& rng);

// Discrete counterpart: each F(y±) is replaced by the mean of `samples`
// evaluations f(Y), Y ~ y±. Uses 2 * batch * samples set queries.
GradientSample discrete_batch_grad(SetOracle& f, const Point& x, double delta, std::size_t batch,
                                   std::size_t samples, Rng& rng);

struct MomentumState {
  Point g_bar;
  std::size_t t = 0;

  static MomentumState zero(std::size_t dim) {
    return MomentumState{Point::Zero(static_cast<Eigen::Index>(dim)), 0};
  }
};

// g_bar <- (1 - rho) g_bar + rho g. rho must be in (0, 1]; larger values are clamped to 1.
MomentumState momentum_update(const MomentumState& state, const Point& g, double rho);

// rho_t = 2 / (t + 3)^{2/3}, t >= 1.
double rho_schedule(std::size_t t);

}  // namespace bbg
