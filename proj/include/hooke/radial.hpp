#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hooke/grid.hpp"

namespace hooke::radial {

/// Relative-motion radial equation
///   -g'' - (d-1)/r g' + L/r^2 g + c/r g + (k/4) r^2 g = E g
/// with L = m^2 (2D) or l(l+1) (3D) and c = 1 when the repulsion is on.
struct RadialProblem {
  Dimension dimension = Dimension::two;
  double k = 4.0;
  int angular = 0;
  bool interaction = true;

  double coulomb() const { return interaction ? 1.0 : 0.0; }
  double centrifugal() const;
  double potential(double r) const;
};

struct InitialData {
  double g0 = 0.0;
  double dg0 = 0.0;
  double r_start = 0.0;
};

struct Trajectory {
  std::vector<double> g;
  int nodes = 0;
  bool diverged = false;
};

struct RadialEigenstate {
  RadialProblem problem;
  int n = 1;
  double energy = 0.0;
  std::vector<double> values;
  double r0 = 0.0;
};

inline constexpr int m_switch = 8;
inline constexpr double g_c = 1e-5;
inline constexpr double divergence_clamp = 1e250;
// Outward runs from the origin use the regular series up to this radius.
inline constexpr double series_reach = 0.1;

/// Starting data for the outward integration. For angular > m_switch the
/// start moves to r0 (snapped to the grid); r0 <= 0 selects 0.1*sqrt(m).
InitialData initial_conditions(const RadialProblem& problem, const RadialGrid& grid,
                               double r0 = 0.0);

/// Fixed-step RK6 from the start point to r_max. A start at the origin takes
/// its first step from the regular power series, scaled to match the data.
Trajectory integrate_rk6(const RadialProblem& problem, double energy, const RadialGrid& grid,
                         const InitialData& init);

struct SolveOptions {
  double r0 = 0.0;
  double tolerance = 1e-10;
  double scan_step = 0.1;
};

RadialEigenstate solve_state(const RadialProblem& problem, int n, const RadialGrid& grid,
                             const SolveOptions& options = {});

/// Eigenvalue of -lap + (k/4) r^2 for radial index n >= 1.
double oscillator_energy(Dimension dim, double k, int angular, int n);

int count_nodes(std::span<const double> g);

/// Smallest grid radius where |g| exceeds the threshold (0 if never).
double inner_cutoff(const RadialGrid& grid, std::span<const double> g, double threshold = 1e-12);

/// Cutoff placing r_max well beyond the outer turning point of the highest state.
double default_r_max(double k, int m_max, int n_max, double step);

class BasisTable {
 public:
  BasisTable(RadialGrid grid, double k, bool interaction, int m_max, int n_max,
             std::vector<RadialEigenstate> states);

  const RadialGrid& grid() const { return grid_; }
  double k() const { return k_; }
  bool interaction() const { return interaction_; }
  int m_max() const { return m_max_; }
  int n_max() const { return n_max_; }
  std::size_t size() const { return states_.size(); }

  // Negative m aliases the |m| profile.
  const RadialEigenstate& state(int m, int n) const;
  double energy(int m, int n) const { return state(m, n).energy; }
  std::span<const double> values(int m, int n) const { return state(m, n).values; }
  const std::vector<RadialEigenstate>& states() const { return states_; }

 private:
  RadialGrid grid_;
  double k_;
  bool interaction_;
  int m_max_;
  int n_max_;
  std::vector<RadialEigenstate> states_;
};

/// Supplies an already computed state for (m, n), or nothing to solve it.
using ReuseState = std::function<std::optional<RadialEigenstate>(int m, int n)>;

/// Failures carry "(m=.., n=..)" in their message.
BasisTable tabulate_basis(double k, int m_max, int n_max, const RadialGrid& grid,
                          bool interaction = true, const ReuseState& reuse = {});

/// Largest |<g_{m,n}, g_{m,n'}>| over n != n' within every channel.
double max_orthogonality_residual(const BasisTable& table);

}  // namespace hooke::radial
