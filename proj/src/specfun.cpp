#include "hooke/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "hooke/error.hpp"
#include "hooke/io.hpp"
#include "hooke/radial.hpp"

namespace hooke::specfun {

namespace {

// Largest x^2/2 for which exp(-x^2/2) stays a normal double.
constexpr double kExpFloor = 708.0;

void fill_column(int n_max, double x, Eigen::Ref<Eigen::VectorXd> col) {
  if (0.5 * x * x > kExpFloor) {
    throw RangeError("psi_0 underflows at x=" + io::fmt(x));
  }
  col(0) = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (n_max >= 1) col(1) = std::sqrt(2.0) * x * col(0);
  for (int n = 1; n < n_max; ++n) {
    col(n + 1) = (x * col(n) - std::sqrt(0.5 * n) * col(n - 1)) / std::sqrt(0.5 * (n + 1));
  }
  if (!col.allFinite()) throw RangeError("Hermite recursion overflow at x=" + io::fmt(x));
}

std::size_t nearest(std::span<const double> x, double v) {
  auto it = std::lower_bound(x.begin(), x.end(), v);
  if (it == x.end()) return x.size() - 1;
  std::size_t i = static_cast<std::size_t>(it - x.begin());
  if (i > 0 && std::abs(x[i - 1] - v) <= std::abs(x[i] - v)) --i;
  return i;
}

}  // namespace

HermiteFunctionTable hermite_table(int n_max, std::span<const double> x_grid) {
  if (n_max < 0) throw InvalidInput("n_max must be non-negative");
  if (x_grid.empty()) throw InvalidInput("empty x grid");
  for (std::size_t i = 1; i < x_grid.size(); ++i) {
    if (!(x_grid[i] > x_grid[i - 1])) throw InvalidInput("x grid must be strictly increasing");
  }
  HermiteFunctionTable t;
  t.n_max = n_max;
  t.x.assign(x_grid.begin(), x_grid.end());
  t.values.resize(n_max + 1, static_cast<Eigen::Index>(t.x.size()));
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    fill_column(n_max, t.x[i], t.values.col(static_cast<Eigen::Index>(i)));
  }
  return t;
}

int quad_safe_order(const HermiteFunctionTable& t, double tol) {
  const double lo = t.x.front();
  const double hi = t.x.back();
  const double step = t.x.size() > 1 ? (hi - lo) / static_cast<double>(t.x.size() - 1) : 1.0;
  const auto last = static_cast<Eigen::Index>(t.x.size() - 1);
  for (int n = 0; n <= t.n_max; ++n) {
    // Gaussian-tail estimate of the mass outside [lo, hi].
    const double a = t.values(n, 0);
    const double b = t.values(n, last);
    const double tail = a * a / (2.0 * std::max(std::abs(lo), 1.0)) +
                        b * b / (2.0 * std::max(std::abs(hi), 1.0));
    const bool resolved = step * std::sqrt(2.0 * n + 1.0) <= std::numbers::pi / 8.0;
    if (tail > tol || !resolved) return n - 1;
  }
  return t.n_max;
}

Eigen::MatrixXd gram_matrix(const HermiteFunctionTable& t, int n) {
  if (n < 0 || n > t.n_max) throw InvalidInput("gram order exceeds table");
  const std::vector<double> w = trapezoid_weights(t.x);
  const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  const auto v = t.values.topRows(n + 1);
  return v * wv.asDiagonal() * v.transpose();
}

SpectralSum delta_sum_1d(const HermiteFunctionTable& t, int N_max, double x_ref) {
  if (N_max < 0 || N_max > t.n_max) throw InvalidInput("N_max exceeds the Hermite table");
  if (x_ref < t.x.front() || x_ref > t.x.back()) throw InvalidInput("x_ref outside the grid");
  Eigen::VectorXd ref(t.n_max + 1);
  fill_column(t.n_max, x_ref, ref);
  SpectralSum s;
  s.label = "S";
  s.reference = x_ref;
  s.reference_index = nearest(t.x, x_ref);
  s.truncation = N_max + 1;
  s.abscissa = t.x;
  s.values.assign(1, std::vector<double>(t.x.size(), 0.0));
  auto& out = s.values[0];
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    double acc = 0.0;
    for (int n = 0; n <= N_max; ++n) acc += t.values(n, static_cast<Eigen::Index>(i)) * ref(n);
    out[i] = acc;
  }
  return s;
}

double apply_delta_sum(const SpectralSum& sum, std::span<const double> f) {
  if (sum.values.empty() || f.size() != sum.abscissa.size()) {
    throw InvalidInput("test function does not match the sum's grid");
  }
  const std::vector<double> w = trapezoid_weights(sum.abscissa);
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += w[i] * sum.values[0][i] * f[i];
  return acc;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(hi > lo) || !(step > 0.0)) throw InvalidInput("bad uniform grid bounds");
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
  std::vector<double> x(n + 1);
  for (std::size_t i = 0; i <= n; ++i) x[i] = lo + static_cast<double>(i) * step;
  x[n] = hi;
  return x;
}

Oscillator2DState oscillator2d_state(double k, int m, int l, const RadialGrid& grid) {
  if (!(k > 0.0)) throw InvalidInput("oscillator strength k must be positive");
  if (l < 0) throw InvalidInput("radial index l must be non-negative");
  if (grid.dimension() != Dimension::two) throw InvalidInput("2D oscillator needs a 2D grid");
  radial::RadialProblem p{Dimension::two, k, std::abs(m), false};
  radial::RadialEigenstate st = radial::solve_state(p, l + 1, grid);
  Oscillator2DState s;
  s.m = m;
  s.l = l;
  s.omega = 0.5 * std::sqrt(k);
  s.energy = radial::oscillator_energy(Dimension::two, k, m, l + 1);
  s.values = std::move(st.values);
  return s;
}

void write_csv(std::ostream& os, const HermiteFunctionTable& t, int n) {
  if (n < 0 || n > t.n_max) throw InvalidInput("function index exceeds table");
  const double step = t.x.size() > 1 ? t.x[1] - t.x[0] : 0.0;
  os << "# n_max=" << t.n_max << " grid_step=" << io::fmt(step) << "\n";
  os << "x,value\n";
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    os << io::fmt(t.x[i]) << ',' << io::fmt(t.values(n, static_cast<Eigen::Index>(i))) << '\n';
  }
}

void write_csv(std::ostream& os, const SpectralSum& s, double grid_step) {
  os << "# n_max=" << s.truncation - 1 << " grid_step=" << io::fmt(grid_step) << "\n";
  os << "x,S\n";
  for (std::size_t i = 0; i < s.abscissa.size(); ++i) {
    os << io::fmt(s.abscissa[i]) << ',' << io::fmt(s.values[0][i]) << '\n';
  }
}

}  // namespace hooke::specfun
