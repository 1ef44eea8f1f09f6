#include "hooke/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hooke/error.hpp"

namespace hooke {

namespace {

// Extended Simpson rule with O(h^4) end corrections.
constexpr double kEnd[4] = {17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0};

}  // namespace

RadialGrid::RadialGrid(double step, double r_max, Dimension dim)
    : step_(step), r_max_(r_max), dim_(dim) {
  if (!(step >= min_step && step <= max_step)) {
    throw InvalidInput("radial grid step " + std::to_string(step) + " outside [1e-4, 5e-2]");
  }
  if (!(r_max > 0.0)) throw InvalidInput("radial grid r_max must be positive");
  const auto intervals = static_cast<std::size_t>(std::llround(r_max / step));
  if (intervals < 8) throw InvalidInput("radial grid needs at least 8 intervals");
  if (std::abs(intervals * step - r_max) > 1e-9 * r_max) {
    throw InvalidInput("r_max must be an integer multiple of the step");
  }
  r_max_ = intervals * step;
  points_.resize(intervals + 1);
  weights_.assign(intervals + 1, step);
  for (std::size_t i = 0; i <= intervals; ++i) points_[i] = static_cast<double>(i) * step;
  for (std::size_t i = 0; i < 4; ++i) {
    weights_[i] = kEnd[i] * step;
    weights_[intervals - i] = kEnd[i] * step;
  }
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double r = points_[i];
    weights_[i] *= (dim_ == Dimension::two) ? r : r * r;
  }
}

std::size_t RadialGrid::nearest_index(double r) const {
  const double x = std::clamp(r / step_, 0.0, static_cast<double>(points_.size() - 1));
  return static_cast<std::size_t>(std::llround(x));
}

double RadialGrid::integrate(std::span<const double> f) const {
  if (f.size() != points_.size()) throw InvalidInput("integrand size does not match the grid");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += weights_[i] * f[i];
  return s;
}

double RadialGrid::inner(std::span<const double> a, std::span<const double> b) const {
  if (a.size() != points_.size() || b.size() != points_.size()) {
    throw InvalidInput("inner product operands do not match the grid");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += weights_[i] * a[i] * b[i];
  return s;
}

bool RadialGrid::same_as(const RadialGrid& other) const {
  return dim_ == other.dim_ && points_.size() == other.points_.size() && step_ == other.step_;
}

std::vector<double> trapezoid_weights(std::span<const double> x) {
  std::vector<double> w(x.size(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double half = 0.5 * (x[i + 1] - x[i]);
    w[i] += half;
    w[i + 1] += half;
  }
  return w;
}

}  // namespace hooke
