#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <span>
#include <vector>

#include "hooke/aniso.hpp"
#include "hooke/grid.hpp"
#include "hooke/radial.hpp"
#include "hooke/spectral_sum.hpp"

namespace hooke::peo {

enum class SpinSector { singlet, triplet };

/// Spatial parity selected by the total spin: singlet -> even, triplet -> odd.
Parity sector_parity(SpinSector s);

/// f(r, phi) = sum_m c_m(r) e^{i m phi} / sqrt(2 pi), |m| <= m_max.
class AngularFunction {
 public:
  AngularFunction(RadialGrid grid, int m_max);

  const RadialGrid& grid() const { return grid_; }
  int m_max() const { return m_max_; }

  // Row m + m_max holds c_m on the radial grid.
  Eigen::MatrixXcd& coefficients() { return c_; }
  const Eigen::MatrixXcd& coefficients() const { return c_; }
  auto channel(int m) { return c_.row(m + m_max_); }
  auto channel(int m) const { return c_.row(m + m_max_); }

  double norm_squared() const;

  /// Values f(r_i, phi_j); rows are radial points.
  Eigen::MatrixXcd sample(std::span<const double> phi) const;

 private:
  RadialGrid grid_;
  int m_max_;
  Eigen::MatrixXcd c_;
};

AngularFunction half_turn(const AngularFunction& f);
AngularFunction project_parity(const AngularFunction& f, Parity eta);

/// sum_{n<=N} (-i pi m)^n / n!, accumulated in 50-digit arithmetic.
std::complex<double> exponential_partial_sum(int m, int N);

/// Smallest N from which every partial sum up to max_terms lies within tol of (-1)^m.
int terms_for_tolerance(int m, double tol, int max_terms = 2000);

AngularFunction truncated_exponential_series(const AngularFunction& f, int N);

/// Relative-motion radial operator of one angular channel,
///   -g'' - g'/r + m^2/r^2 g + c/r g + (k/4) r^2 g,
/// with eighth-order finite-difference derivatives.
class RadialHamiltonian2D {
 public:
  RadialHamiltonian2D(RadialGrid grid, double k, bool interaction = true);

  const RadialGrid& grid() const { return grid_; }
  std::vector<double> apply(int m, std::span<const double> g) const;

 private:
  RadialGrid grid_;
  double k_;
  bool interaction_;
  // Stencil start and weights (first, second derivative) per grid point.
  std::vector<std::size_t> start_;
  std::vector<std::array<double, 9>> d1_;
  std::vector<std::array<double, 9>> d2_;
};

/// (H - P) Psi = H A_eta Psi with eta chosen by the spin sector.
AngularFunction peo_kernel_apply(const RadialHamiltonian2D& h, SpinSector spin,
                                 const AngularFunction& psi);

/// Parity of an l-wave under r -> -r in 3D.
int spatial_parity_3d(int l);

/// S^eta(r, r_ref; dphi) for the isotropic basis.
SpectralSum spectral_peo_sum(const radial::BasisTable& basis, Parity eta, double r_ref,
                             std::span<const double> dphi);

/// Same sum over anisotropic eigenstates of one parity class.
SpectralSum spectral_peo_sum(const radial::BasisTable& basis, const aniso::BasisIndexMap& map,
                             const aniso::AnisoSpectrum& spectrum, Parity eta, double r_ref,
                             std::span<const double> dphi);

/// Full width at half maximum of the positive lobe containing the peak.
double fwhm(std::span<const double> x, std::span<const double> y);

}  // namespace hooke::peo
