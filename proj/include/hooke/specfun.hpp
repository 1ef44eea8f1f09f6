#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <vector>

#include "hooke/grid.hpp"
#include "hooke/spectral_sum.hpp"

namespace hooke::specfun {

struct HermiteFunctionTable {
  int n_max = 0;
  std::vector<double> x;
  Eigen::MatrixXd values;  // (n_max+1) x x.size()
};

/// psi_n(x) for n = 0..n_max by the normalized three-term recursion.
HermiteFunctionTable hermite_table(int n_max, std::span<const double> x_grid);

/// Largest n whose truncated tail mass outside the grid stays below tol and
/// whose oscillation is resolved by the step.
int quad_safe_order(const HermiteFunctionTable& table, double tol = 1e-7);

/// Composite trapezoid Gram matrix of psi_0..psi_n.
Eigen::MatrixXd gram_matrix(const HermiteFunctionTable& table, int n);

/// S(x, x_ref) = sum_{n<=N_max} psi_n(x) psi_n(x_ref).
SpectralSum delta_sum_1d(const HermiteFunctionTable& table, int N_max, double x_ref);

/// Trapezoid integral of S(x, x_ref) f(x).
double apply_delta_sum(const SpectralSum& sum, std::span<const double> f);

std::vector<double> uniform_grid(double lo, double hi, double step);

struct Oscillator2DState {
  int m = 0;
  int l = 0;
  double omega = 0.0;
  double energy = 0.0;
  std::vector<double> values;
};

/// Radial state of -lap + (k/4) r^2, solved by the shooting code with the
/// repulsion switched off. The energy is the analytic value.
Oscillator2DState oscillator2d_state(double k, int m, int l, const RadialGrid& grid);

void write_csv(std::ostream& os, const HermiteFunctionTable& table, int n);
void write_csv(std::ostream& os, const SpectralSum& sum, double grid_step);

}  // namespace hooke::specfun
