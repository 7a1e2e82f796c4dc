#include "bbg/estimators.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "bbg/error.hpp"

namespace bbg {

Point sample_sphere(std::size_t dim, Rng& rng) {
  if (dim == 0) throw ArgumentError("sphere dimension must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  Point u(static_cast<Eigen::Index>(dim));
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = normal(rng);
    norm = u.norm();
  } while (!(norm > 0.0));
  return u / norm;
}

Point sample_ball(std::size_t dim, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Point u = sample_sphere(dim, rng);
  return u * std::pow(unif(rng), 1.0 / static_cast<double>(dim));
}

namespace {

void check_radius(double delta) {
  if (!(delta > 0.0)) throw ArgumentError(fmt::format("smoothing radius {} must be positive", delta));
}

}  // namespace

Point one_point_grad(ValueOracle& f, const Point& x, double delta, const Point& u) {
  check_radius(delta);
  require_dim(x, f.dim(), "one_point_grad");
  require_dim(u, f.dim(), "one_point_grad direction");
  const double scale = static_cast<double>(f.dim()) / delta;
  return (scale * f.eval(x + delta * u)) * u;
}

Point two_point_grad(ValueOracle& f, const Point& x, double delta, const Point& u) {
  check_radius(delta);
  require_dim(x, f.dim(), "two_point_grad");
  require_dim(u, f.dim(), "two_point_grad direction");
  const double plus = f.eval(x + delta * u);
  const double minus = f.eval(x - delta * u);
  const double scale = static_cast<double>(f.dim()) / (2.0 * delta);
  return (scale * (plus - minus)) * u;
}

GradientSample batch_grad(ValueOracle& f, const Point& x, double delta, std::size_t batch, Rng& rng) {
  check_radius(delta);
  if (batch == 0) throw ArgumentError("batch size must be positive");
  require_dim(x, f.dim(), "batch_grad");
  const BoxDomain shrunk = shrink_domain(f.domain(), delta);
  if (!shrunk.contains(x)) throw DomainError("batch_grad: iterate outside the shrunk domain");

  const Point center = x.array() + delta;
  Point sum = Point::Zero(x.size());
  for (std::size_t i = 0; i < batch; ++i) {
    sum += two_point_grad(f, center, delta, sample_sphere(f.dim(), rng));
  }
  return GradientSample{sum / static_cast<double>(batch), 2 * batch, center};
}

GradientSample discrete_batch_grad(SetOracle& f, const Point& x, double delta, std::size_t batch,
                                   std::size_t samples, Rng& rng) {
  check_radius(delta);
  if (batch == 0 || samples == 0) throw ArgumentError("batch and sample sizes must be positive");
  const std::size_t d = f.ground_size();
  require_dim(x, d, "discrete_batch_grad");
  if (!(delta < 0.5)) throw DomainError("smoothing radius must be below 1/2 on the unit cube");
  if (!BoxDomain::unit(d).contains(x.array() + 2.0 * delta)) {
    throw DomainError("discrete_batch_grad: iterate outside [0, 1 - 2 delta]^d");
  }
  if (x.minCoeff() < -kDefaultFeasibilityTol) {
    throw DomainError("discrete_batch_grad: negative iterate");
  }

  const Point center = x.array() + delta;
  const double scale = static_cast<double>(d) / (2.0 * delta);
  Point sum = Point::Zero(x.size());
  for (std::size_t i = 0; i < batch; ++i) {
    const Point u = sample_sphere(d, rng);
    // Clamp away rounding noise so the points are valid probability vectors.
    const Point plus = (center + delta * u).cwiseMax(0.0).cwiseMin(1.0);
    const Point minus = (center - delta * u).cwiseMax(0.0).cwiseMin(1.0);
    const double f_plus = multilinear_sample(f, plus, samples, rng);
    const double f_minus = multilinear_sample(f, minus, samples, rng);
    sum += (scale * (f_plus - f_minus)) * u;
  }
  return GradientSample{sum / static_cast<double>(batch), 2 * batch * samples, center};
}

MomentumState momentum_update(const MomentumState& state, const Point& g, double rho) {
  if (state.g_bar.size() != g.size()) {
    throw ArgumentError(fmt::format("momentum has dimension {} but gradient has {}", state.g_bar.size(),
                                    g.size()));
  }
  if (!(rho > 0.0)) throw ArgumentError(fmt::format("momentum weight {} must be positive", rho));
  rho = std::min(rho, 1.0);
  return MomentumState{(1.0 - rho) * state.g_bar + rho * g, state.t + 1};
}

double rho_schedule(std::size_t t) {
  if (t == 0) throw ArgumentError("rho schedule starts at t = 1");
  return std::min(1.0, 2.0 / std::pow(static_cast<double>(t) + 3.0, 2.0 / 3.0));
}

}  // namespace bbg
