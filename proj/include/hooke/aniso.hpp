#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "hooke/radial.hpp"
#include "hooke/spectral_sum.hpp"

namespace hooke::aniso {

/// (m, n) <-> i over m in [-m_max, m_max], n in [1, n_max]; m ascending, then n.
class BasisIndexMap {
 public:
  BasisIndexMap(int m_max, int n_max);

  int m_max() const { return m_max_; }
  int n_max() const { return n_max_; }
  std::size_t size() const { return entries_.size(); }
  int m(std::size_t i) const { return entries_[i].first; }
  int n(std::size_t i) const { return entries_[i].second; }
  std::size_t index(int m, int n) const;
  const std::vector<std::pair<int, int>>& entries() const { return entries_; }

 private:
  int m_max_;
  int n_max_;
  std::vector<std::pair<int, int>> entries_;
};

/// Coupling strength of r^2 cos^2(phi) for U = kx x^2/2 + ky y^2/2.
double anisotropy_q(double kx, double ky);

/// int r^2 a(r) b(r) r dr; both profiles must live on the same grid.
double radial_moment(const RadialGrid& ga, std::span<const double> a, const RadialGrid& gb,
                     std::span<const double> b);
double radial_moment(const radial::BasisTable& basis, int m, int n, int m2, int n2);

/// <m| cos^2 phi |m'>.
double angular_factor(int m, int m2);

Eigen::MatrixXd build_matrix(const radial::BasisTable& basis, const BasisIndexMap& map, double q);

struct AnisoSpectrum {
  Eigen::VectorXd energies;  // ascending
  Eigen::MatrixXd vectors;   // column l holds a_i for state l
  std::vector<Parity> parity;
  double max_residual = 0.0;  // max ||Hv - Ev|| / ||H||
};

/// Diagonalizes each m-parity block separately so every eigenvector is
/// supported on exactly one block.
AnisoSpectrum diagonalize(const Eigen::MatrixXd& h, const BasisIndexMap& map);

std::size_t count_parity(const AnisoSpectrum& s, Parity p);

}  // namespace hooke::aniso
