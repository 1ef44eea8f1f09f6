#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <utility>
#include <vector>

#include "hooke/exchange.hpp"
#include "hooke/fd_oracle.hpp"
#include "hooke/grid.hpp"

namespace hooke::kernel {

enum class Mode { energy_weighted, constant_weight, exact_deflation };

/// One surrogate state phi_{m,l} of the truncated kernel.
struct KernelState {
  int m = 0;
  int l = 0;
  double energy = 0.0;
  std::vector<double> values;  // on the spec grid
};

struct KernelSpec {
  Mode mode = Mode::energy_weighted;
  std::vector<KernelState> states;
  double e_c = 0.0;
  double lambda = 0.0;
  double k = 4.0;
  bool interaction = true;
  RadialGrid grid{0.02, 10.0};

  void validate() const;
};

/// Oscillator surrogates m = 2j, j in {0, +-1}, l in {0, 1, 2}. A NaN e_c
/// selects the lowest surrogate energy.
KernelSpec default_spec(Mode mode, double lambda, const RadialGrid& grid, double k = 4.0,
                        double e_c = std::numeric_limits<double>::quiet_NaN());

struct DeflatedOperator {
  int m = 0;
  double lambda = 0.0;
  radial::FvOperator base;
  std::vector<Eigen::VectorXd> vectors;  // W^{1/2} phi on the unknowns
  std::vector<double> weights;

  std::size_t rank() const { return vectors.size(); }
  Eigen::MatrixXd matrix() const;
};

DeflatedOperator assemble_channel(const KernelSpec& spec, int m);

/// n-th (1-based) eigenpair; the state is sampled on the spec grid.
std::pair<double, std::vector<double>> solve_channel(const DeflatedOperator& op, int n);

/// sum w phi(r) phi(r') e^{i m dphi} / 2 pi over the spec states.
std::complex<double> kernel_matrix_elements(const KernelSpec& spec, double dphi, double r,
                                            double r2);

/// |<Phi|PEO|Phi>| for the normalized trial state.
double slater_vanishing_check(const exchange::DiscretePEO& peo, const Eigen::VectorXd& trial);

}  // namespace hooke::kernel
