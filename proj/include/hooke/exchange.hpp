#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace hooke::exchange {

using cd = std::complex<double>;

/// Two-particle amplitude on a shared per-axis grid x_a = -L + a*2L/n.
/// Storage is row-major over (particle-1 axes, particle-2 axes).
struct TwoParticleField {
  int dim = 1;
  int n = 0;
  double half_width = 0.0;
  bool periodic = true;
  std::vector<cd> data;

  std::size_t per_particle() const;
  std::vector<double> axis() const;
};

using PairFunction = std::function<cd(std::span<const double> x1, std::span<const double> x2)>;

TwoParticleField make_field(int dim, int n, double half_width, const PairFunction& f);

TwoParticleField exchange_exact(const TwoParticleField& f);

/// Partial sum through total order N of
///   sum_{e} i^{|e|} / prod(e_a!) prod_a (dp_a)^{e_a} (dr_a)^{e_a},
/// position factors applied first, momenta by FFT differentiation.
TwoParticleField exchange_series(const TwoParticleField& f, int order);

/// Relative L2 error of every partial sum 0..max_order against the exact swap.
std::vector<double> exchange_series_errors(const TwoParticleField& f, int max_order);

double relative_l2(const TwoParticleField& a, const TwoParticleField& b);

/// k spin-1/2 amplitudes; bit i of the basis index set means particle i is down.
struct SpinConfig {
  int k = 0;
  Eigen::VectorXcd amplitudes;

  static SpinConfig basis_state(int k, unsigned bits);
  void normalize();
};

/// Swap of spins i and j by permuting basis indices.
SpinConfig spin_exchange(const SpinConfig& cfg, int i, int j);

/// 1/2 + 2 s_i.s_j with spin-1/2 operators s = sigma/2.
Eigen::MatrixXcd spin_exchange_operator(int k, int i, int j);
SpinConfig spin_exchange_formula(const SpinConfig& cfg, int i, int j);

/// k particles, each carrying one of sites*spins single-particle labels
/// a = site*spins + spin. Basis index is row-major over particles.
struct ProductSpace {
  int particles = 2;
  int sites = 2;
  int spins = 1;

  int single() const { return sites * spins; }
  std::size_t dimension() const;
  std::vector<int> labels(std::size_t index) const;
  std::size_t index(std::span<const int> labels) const;
};

/// Index permutations (result[b] = image of basis state b).
std::vector<std::size_t> chi_permutation(const ProductSpace& s, int i, int j);       // full label swap
std::vector<std::size_t> position_permutation(const ProductSpace& s, int i, int j);  // sites only
std::vector<std::size_t> spin_permutation(const ProductSpace& s, int i, int j);      // spins only

Eigen::MatrixXd permutation_matrix(const std::vector<std::size_t>& perm);

/// Product of chi_ij over the given pairs, rightmost applied first.
Eigen::MatrixXd exchange_product(const ProductSpace& s, const std::vector<std::pair<int, int>>& pairs);

/// (1/k!) sum_P sgn(P) P over particle permutations.
Eigen::MatrixXd antisymmetrizer(const ProductSpace& s);

/// sum_i h(i) + sum_{i<j} V(i,j); V acts on the pair label space (single^2).
Eigen::MatrixXd build_hamiltonian(const ProductSpace& s, const Eigen::MatrixXd& one_body,
                                  const Eigen::MatrixXd& pair);

struct DiscretePEO {
  ProductSpace space;
  Eigen::VectorXd energies;
  Eigen::MatrixXd states;  // symmetry-adapted eigenvectors (columns)
  std::vector<bool> antisymmetric;
  Eigen::MatrixXd peo;
  double branch_residual = 0.0;  // max over n of ||(H - PEO)|n> - [n antisym] E_n|n>||
  std::size_t antisymmetric_count() const;
};

DiscretePEO build_discrete_peo(const Eigen::MatrixXd& h, const ProductSpace& space);

}  // namespace hooke::exchange
