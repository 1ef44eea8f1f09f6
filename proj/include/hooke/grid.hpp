#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hooke {

enum class Dimension { two = 2, three = 3 };

/// Uniform radial mesh r_i = i*h, i = 0..N, with N*h = r_max.
///
/// The quadrature weights include the radial measure w(r) = r (2D) or
/// r^2 (3D) and use the fourth-order extended Simpson end corrections, so
/// sum(weights) reproduces the integral of w over [0, r_max] exactly.
class RadialGrid {
 public:
  RadialGrid(double step, double r_max, Dimension dim = Dimension::two);

  double step() const { return step_; }
  double r_max() const { return r_max_; }
  std::size_t size() const { return points_.size(); }
  Dimension dimension() const { return dim_; }

  double r(std::size_t i) const { return points_[i]; }
  std::span<const double> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }

  std::size_t nearest_index(double r) const;

  double integrate(std::span<const double> f) const;
  double inner(std::span<const double> a, std::span<const double> b) const;

  bool same_as(const RadialGrid& other) const;

  static constexpr double min_step = 1e-4;
  static constexpr double max_step = 5e-2;

 private:
  double step_;
  double r_max_;
  Dimension dim_;
  std::vector<double> points_;
  std::vector<double> weights_;
};

/// Composite trapezoid weights for an arbitrary (strictly increasing) grid.
std::vector<double> trapezoid_weights(std::span<const double> x);

}  // namespace hooke
