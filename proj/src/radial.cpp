#include "hooke/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "hooke/error.hpp"
#include "hooke/parallel.hpp"
#include "hooke/rk6.hpp"

namespace hooke::radial {

namespace {

using Vec2 = std::array<double, 2>;

double damping(Dimension d) { return d == Dimension::two ? 1.0 : 2.0; }

struct Rhs {
  const RadialProblem& p;
  double energy;
  double damp;
  Vec2 operator()(double r, const Vec2& y) const {
    return {y[1], -damp / r * y[1] + (p.potential(r) - energy) * y[0]};
  }
};

// Regular series r^s * sum a_j r^j about the origin, evaluated at r.
Vec2 frobenius(const RadialProblem& p, double energy, double amplitude, double r) {
  const int s = p.angular;
  const double two_s = 2.0 * s;
  const double extra = p.dimension == Dimension::two ? 0.0 : 1.0;
  const double c = p.coulomb();
  const double quarter_k = 0.25 * p.k;
  std::array<double, 96> coef{};
  coef[0] = 1.0;
  double sum = 1.0;
  double dsum = s;  // sum of (s+j) a_j r^j
  int quiet = 0;
  double rj = 1.0;
  for (int j = 1; j < static_cast<int>(coef.size()); ++j) {
    double rhs = c * coef[j - 1];
    if (j >= 2) rhs -= energy * coef[j - 2];
    if (j >= 4) rhs += quarter_k * coef[j - 4];
    coef[j] = rhs / (j * (two_s + j + extra));
    rj *= r;
    const double term = coef[j] * rj;
    sum += term;
    dsum += (s + j) * term;
    quiet = std::abs(term) < 1e-18 * std::abs(sum) ? quiet + 1 : 0;
    if (quiet >= 4) break;
  }
  const double rs = std::pow(r, s);
  return {amplitude * rs * sum, amplitude * rs * dsum / r};
}

struct Shot {
  std::vector<double> g;
  int nodes = 0;
  bool diverged = false;
};

std::size_t start_index(const RadialGrid& grid, const InitialData& init) {
  return init.r_start > 0.0 ? grid.nearest_index(init.r_start) : 0;
}

// Outward integration up to (and including) index stop.
Shot shoot(const RadialProblem& p, double energy, const RadialGrid& grid, const InitialData& init,
           std::size_t stop, bool keep) {
  const double h = grid.step();
  Shot shot;
  if (keep) shot.g.assign(grid.size(), 0.0);
  const std::size_t i0 = start_index(grid, init);
  Rhs rhs{p, energy, damping(p.dimension)};
  Vec2 y;
  std::size_t i;
  double last = 0.0;
  if (i0 == 0) {
    const int s = p.angular;
    double amplitude = 1.0;
    if (s == 0) {
      amplitude = init.g0;
    } else if (init.dg0 != 0.0) {
      amplitude = init.dg0 / (s * std::pow(h, s - 1));
    }
    if (keep) shot.g[0] = s == 0 ? amplitude : 0.0;
    // RK6 loses order next to the 1/r singularity; the series covers [0, series_reach].
    const std::size_t reach = std::clamp<std::size_t>(grid.nearest_index(series_reach), 1, stop);
    for (i = 1; i < reach; ++i) {
      const double v = frobenius(p, energy, amplitude, grid.r(i))[0];
      if (keep) shot.g[i] = v;
      if (v != 0.0) {
        if (last != 0.0 && std::signbit(last) != std::signbit(v)) ++shot.nodes;
        last = v;
      }
    }
    y = frobenius(p, energy, amplitude, grid.r(reach));
    i = reach;
  } else {
    y = {init.g0, init.dg0};
    i = i0;
  }
  if (keep) shot.g[i] = y[0];
  if (y[0] != 0.0) {
    if (last != 0.0 && std::signbit(last) != std::signbit(y[0])) ++shot.nodes;
    last = y[0];
  }
  for (; i < stop; ++i) {
    y = rk6::step<2>(rhs, grid.r(i), y, h);
    if (!(std::abs(y[0]) < divergence_clamp)) {
      shot.diverged = true;
      const double sign = std::signbit(y[0]) ? -1.0 : 1.0;
      if (std::signbit(last) != std::signbit(sign) && last != 0.0) ++shot.nodes;
      if (keep) std::fill(shot.g.begin() + i + 1, shot.g.begin() + stop + 1, sign * divergence_clamp);
      return shot;
    }
    if (y[0] != 0.0) {
      if (last != 0.0 && std::signbit(last) != std::signbit(y[0])) ++shot.nodes;
      last = y[0];
    }
    if (keep) shot.g[i + 1] = y[0];
  }
  return shot;
}

// Inward integration from r_max (g = 0) down to index stop, rescaled to stay finite.
std::vector<double> shoot_inward(const RadialProblem& p, double energy, const RadialGrid& grid,
                                 std::size_t stop) {
  const double h = grid.step();
  const std::size_t last = grid.size() - 1;
  std::vector<double> g(grid.size(), 0.0);
  Rhs rhs{p, energy, damping(p.dimension)};
  Vec2 y{0.0, -1e-30};
  for (std::size_t i = last; i > stop; --i) {
    y = rk6::step<2>(rhs, grid.r(i), y, -h);
    g[i - 1] = y[0];
    if (std::abs(y[0]) > 1e100) {
      for (std::size_t j = i - 1; j <= last; ++j) g[j] *= 1e-100;
      y[0] *= 1e-100;
      y[1] *= 1e-100;
    }
  }
  return g;
}

std::size_t turning_index(const RadialProblem& p, double energy, const RadialGrid& grid,
                          std::size_t lowest) {
  std::size_t i = grid.size() - 3;
  while (i > lowest && p.potential(grid.r(i)) > energy) --i;
  return std::max(i, lowest);
}

}  // namespace

double RadialProblem::centrifugal() const {
  const double a = angular;
  return dimension == Dimension::two ? a * a : a * (a + 1.0);
}

double RadialProblem::potential(double r) const {
  return centrifugal() / (r * r) + coulomb() / r + 0.25 * k * r * r;
}

InitialData initial_conditions(const RadialProblem& problem, const RadialGrid& grid, double r0) {
  const int m = problem.angular;
  const double h = grid.step();
  if (m == 0) return {1.0, h, 0.0};
  if (m <= m_switch) return {0.0, m * std::pow(h, m - 1), 0.0};
  if (r0 <= 0.0) r0 = 0.1 * std::sqrt(static_cast<double>(m));
  const std::size_t i = std::max<std::size_t>(1, grid.nearest_index(r0));
  const double snapped = grid.r(i);
  return {g_c, m * g_c / snapped, snapped};
}

Trajectory integrate_rk6(const RadialProblem& problem, double energy, const RadialGrid& grid,
                         const InitialData& init) {
  if (problem.angular < 0) throw InvalidInput("angular quantum number must be non-negative");
  Shot s = shoot(problem, energy, grid, init, grid.size() - 1, true);
  return {std::move(s.g), s.nodes, s.diverged};
}

double oscillator_energy(Dimension dim, double k, int angular, int n) {
  const double offset = dim == Dimension::two ? 1.0 : 1.5;
  return std::sqrt(k) * (2.0 * (n - 1) + std::abs(angular) + offset);
}

int count_nodes(std::span<const double> g) {
  int nodes = 0;
  double last = 0.0;
  for (double v : g) {
    if (v == 0.0) continue;
    if (last != 0.0 && std::signbit(last) != std::signbit(v)) ++nodes;
    last = v;
  }
  return nodes;
}

double inner_cutoff(const RadialGrid& grid, std::span<const double> g, double threshold) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (std::abs(g[i]) > threshold) return grid.r(i);
  }
  return 0.0;
}

double default_r_max(double k, int m_max, int n_max, double step) {
  const double e_max = oscillator_energy(Dimension::two, k, m_max, n_max) + 1.0;
  const double turning = 2.0 * std::sqrt(e_max / k);
  const double target = std::max(12.0, turning + 6.0 * std::pow(4.0 / k, 0.25));
  return step * std::ceil(target / step - 1e-9);
}

RadialEigenstate solve_state(const RadialProblem& problem, int n, const RadialGrid& grid,
                             const SolveOptions& options) {
  if (n < 1) throw InvalidInput("radial index n must be >= 1");
  if (!(problem.k > 0.0)) throw InvalidInput("potential strength k must be positive");
  if (problem.angular < 0) throw InvalidInput("angular quantum number must be non-negative");
  if (problem.dimension != grid.dimension()) throw InvalidInput("grid dimension mismatch");

  const InitialData init = initial_conditions(problem, grid, options.r0);
  const std::size_t last = grid.size() - 1;
  auto nodes_at = [&](double e) { return shoot(problem, e, grid, init, last, false).nodes; };

  const double guess = oscillator_energy(problem.dimension, problem.k, problem.angular, n);
  double lo = guess - 2.0;
  double hi = guess + 2.0 * std::sqrt(problem.k);
  bool found = false;
  double a = 0.0, b = 0.0;
  for (int attempt = 0; attempt < 2 && !found; ++attempt) {
    if (attempt == 1) {
      const double width = hi - lo;
      lo -= width;
      hi += width;
    }
    if (nodes_at(lo) >= n) continue;
    double prev = lo;
    for (double e = lo + options.scan_step; e <= hi + 1e-12; e += options.scan_step) {
      if (nodes_at(e) >= n) {
        a = prev;
        b = e;
        found = true;
        break;
      }
      prev = e;
    }
  }
  if (!found) {
    throw NoBracket("no eigenvalue bracket for angular=" + std::to_string(problem.angular) +
                        " n=" + std::to_string(n),
                    lo, hi);
  }
  while (b - a >= options.tolerance) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    (nodes_at(mid) >= n ? b : a) = mid;
  }
  const double energy = 0.5 * (a + b);

  // Outward to the outer turning point, inward from r_max, joined there.
  const std::size_t i0 = start_index(grid, init);
  std::size_t match = turning_index(problem, energy, grid, i0 + 4);
  Shot out = shoot(problem, energy, grid, init, match, true);
  double peak = 0.0;
  for (std::size_t i = 0; i <= match; ++i) peak = std::max(peak, std::abs(out.g[i]));
  while (match > i0 + 4 && std::abs(out.g[match]) < 1e-6 * peak) --match;
  std::vector<double> in = shoot_inward(problem, energy, grid, match);
  if (in[match] == 0.0 || !std::isfinite(out.g[match])) {
    throw RangeError("profile matching failed for angular=" + std::to_string(problem.angular) +
                     " n=" + std::to_string(n));
  }
  const double scale = out.g[match] / in[match];
  std::vector<double> g(grid.size(), 0.0);
  for (std::size_t i = 0; i <= match; ++i) g[i] = out.g[i];
  for (std::size_t i = match + 1; i <= last; ++i) g[i] = in[i] * scale;

  const double norm = std::sqrt(grid.inner(g, g));
  if (!(norm > 0.0) || !std::isfinite(norm)) throw RangeError("profile normalization failed");
  double lead = 0.0;
  double gmax = 0.0;
  for (double v : g) gmax = std::max(gmax, std::abs(v));
  for (double v : g) {
    if (std::abs(v) > 1e-6 * gmax) {
      lead = v;
      break;
    }
  }
  const double factor = (lead < 0.0 ? -1.0 : 1.0) / norm;
  for (double& v : g) v *= factor;

  RadialEigenstate state;
  state.problem = problem;
  state.n = n;
  state.energy = energy;
  state.values = std::move(g);
  state.r0 = init.r_start;
  return state;
}

BasisTable::BasisTable(RadialGrid grid, double k, bool interaction, int m_max, int n_max,
                       std::vector<RadialEigenstate> states)
    : grid_(std::move(grid)),
      k_(k),
      interaction_(interaction),
      m_max_(m_max),
      n_max_(n_max),
      states_(std::move(states)) {
  if (m_max < 0 || n_max < 1) throw InvalidInput("basis needs m_max >= 0 and n_max >= 1");
  if (states_.size() != static_cast<std::size_t>((m_max + 1) * n_max)) {
    throw InvalidInput("basis state count does not match m_max and n_max");
  }
}

const RadialEigenstate& BasisTable::state(int m, int n) const {
  const int am = std::abs(m);
  if (am > m_max_ || n < 1 || n > n_max_) {
    throw InvalidInput("basis index (" + std::to_string(m) + "," + std::to_string(n) +
                       ") out of range");
  }
  return states_[static_cast<std::size_t>(am * n_max_ + (n - 1))];
}

BasisTable tabulate_basis(double k, int m_max, int n_max, const RadialGrid& grid, bool interaction,
                          const ReuseState& reuse) {
  if (m_max < 0 || n_max < 1) throw InvalidInput("basis needs m_max >= 0 and n_max >= 1");
  std::vector<RadialEigenstate> states(static_cast<std::size_t>((m_max + 1) * n_max));
  double r0 = 0.0;
  for (int m = 0; m <= m_max; ++m) {
    RadialProblem p{grid.dimension(), k, m, interaction};
    SolveOptions opt;
    opt.r0 = r0;
    const std::size_t base = static_cast<std::size_t>(m * n_max);
    parallel_for(static_cast<std::size_t>(n_max), [&](std::size_t j) {
      const int n = static_cast<int>(j) + 1;
      if (reuse) {
        if (auto s = reuse(m, n)) {
          states[base + j] = std::move(*s);
          return;
        }
      }
      const std::string where = " (m=" + std::to_string(m) + ", n=" + std::to_string(n) + ")";
      try {
        states[base + j] = solve_state(p, n, grid, opt);
      } catch (const NoBracket& e) {
        throw NoBracket(e.what() + where, e.lower(), e.upper());
      } catch (const RangeError& e) {
        throw RangeError(e.what() + where);
      }
    });
    // The next channel starts where this ground state becomes non-negligible.
    if (m + 1 > m_switch) r0 = inner_cutoff(grid, states[base].values);
  }
  return BasisTable(grid, k, interaction, m_max, n_max, std::move(states));
}

double max_orthogonality_residual(const BasisTable& table) {
  const int nm = table.m_max() + 1;
  std::vector<double> worst(static_cast<std::size_t>(nm), 0.0);
  parallel_for(static_cast<std::size_t>(nm), [&](std::size_t mi) {
    const int m = static_cast<int>(mi);
    double w = 0.0;
    for (int a = 1; a <= table.n_max(); ++a) {
      for (int b = a + 1; b <= table.n_max(); ++b) {
        w = std::max(w, std::abs(table.grid().inner(table.values(m, a), table.values(m, b))));
      }
    }
    worst[mi] = w;
  });
  return *std::max_element(worst.begin(), worst.end());
}

}  // namespace hooke::radial
