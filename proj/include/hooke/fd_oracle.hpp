#pragma once

#include <cstddef>
#include <vector>

#include "hooke/radial.hpp"

namespace hooke::radial {

/// Vertex-centred finite-volume discretization of the radial operator with
/// g(r_max) = 0, symmetrized by the cell weights: M = W^{-1/2} A W^{-1/2}.
/// Node 0 carries a half cell and is present only for angular = 0.
struct FvOperator {
  double step = 0.0;
  std::size_t first = 0;        // grid index of the first unknown
  std::vector<double> weight;   // cell integrals of the radial measure
  std::vector<double> diag;     // symmetric tridiagonal
  std::vector<double> off;
};

FvOperator fv_operator(const RadialProblem& problem, double step, double r_max);

struct FdSpectrum {
  std::vector<double> energies;
  // Profiles on grid indices 0..N, normalized with the cell weights.
  std::vector<std::vector<double>> profiles;
};

/// Lowest `count` eigenpairs of the three-point scheme (tridiagonal solver).
FdSpectrum fd_spectrum(const RadialProblem& problem, double step, double r_max, int count,
                       bool vectors = false);

/// Richardson combination (4 E(h/2) - E(h)) / 3; profiles are returned on the coarse grid.
FdSpectrum fd_spectrum_extrapolated(const RadialProblem& problem, double step, double r_max,
                                    int count, bool vectors = false);

}  // namespace hooke::radial
