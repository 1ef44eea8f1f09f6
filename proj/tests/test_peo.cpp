#include <gtest/gtest.h>

#include <boost/math/special_functions/spherical_harmonic.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "hooke/error.hpp"
#include "hooke/peo.hpp"

using namespace hooke;
using namespace hooke::peo;
using cd = std::complex<double>;

namespace {

AngularFunction random_function(const RadialGrid& g, int m_max, std::mt19937& rng) {
  std::normal_distribution<double> nd;
  AngularFunction f(g, m_max);
  for (int m = -m_max; m <= m_max; ++m) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double env = std::exp(-g.r(i));
      f.channel(m)(static_cast<Eigen::Index>(i)) = env * cd(nd(rng), nd(rng));
    }
  }
  return f;
}

double max_diff(const AngularFunction& a, const AngularFunction& b) {
  return (a.coefficients() - b.coefficients()).cwiseAbs().maxCoeff();
}

const radial::BasisTable& small_basis() {
  static const radial::BasisTable t = radial::tabulate_basis(4.0, 4, 10, RadialGrid(0.005, 12.0));
  return t;
}

}  // namespace

TEST(HalfTurn, SingleHarmonics) {
  RadialGrid g(0.05, 2.0);
  AngularFunction f(g, 3);
  f.channel(2).setConstant(1.0);
  EXPECT_EQ(max_diff(half_turn(f), f), 0.0);
  AngularFunction h(g, 3);
  h.channel(3).setConstant(1.0);
  AngularFunction neg = h;
  neg.coefficients() *= -1.0;
  EXPECT_EQ(max_diff(half_turn(h), neg), 0.0);
}

TEST(HalfTurn, MatchesResamplingShiftedByPi) {
  std::mt19937 rng(7);
  RadialGrid g(0.05, 2.0);
  const auto f = random_function(g, 5, rng);
  std::vector<double> phi(16);
  for (int j = 0; j < 16; ++j) phi[j] = 2.0 * std::numbers::pi * j / 16.0;
  const Eigen::MatrixXcd a = f.sample(phi);
  const Eigen::MatrixXcd b = half_turn(f).sample(phi);
  double err = 0.0;
  for (int j = 0; j < 16; ++j) err = std::max(err, (b.col(j) - a.col((j + 8) % 16)).cwiseAbs().maxCoeff());
  EXPECT_LT(err, 1e-10);
  EXPECT_LT(max_diff(half_turn(half_turn(f)), f), 1e-15);
}

TEST(ProjectParity, Examples) {
  RadialGrid g(0.05, 2.0);
  AngularFunction s(g, 2);
  s.channel(0).setConstant(1.0);
  EXPECT_EQ(max_diff(project_parity(s, Parity::even), s), 0.0);
  EXPECT_EQ(project_parity(s, Parity::odd).coefficients().cwiseAbs().maxCoeff(), 0.0);

  AngularFunction f(g, 2);
  f.channel(1).setConstant(1.0);
  f.channel(2).setConstant(1.0);
  auto e = project_parity(f, Parity::even);
  auto o = project_parity(f, Parity::odd);
  EXPECT_EQ(e.channel(2).cwiseAbs().minCoeff(), 1.0);
  EXPECT_EQ(e.channel(1).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(o.channel(1).cwiseAbs().minCoeff(), 1.0);
  EXPECT_EQ(o.channel(2).cwiseAbs().maxCoeff(), 0.0);
}

TEST(ProjectParity, AlgebraOnRandomFunctions) {
  std::mt19937 rng(11);
  RadialGrid g(0.05, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_function(g, 6, rng);
    const auto e = project_parity(f, Parity::even);
    const auto o = project_parity(f, Parity::odd);
    AngularFunction sum = e;
    sum.coefficients() += o.coefficients();
    EXPECT_LT(max_diff(sum, f), 1e-12);
    EXPECT_LT(max_diff(project_parity(e, Parity::even), e), 1e-12);
    EXPECT_LT(max_diff(project_parity(o, Parity::odd), o), 1e-12);
    EXPECT_LT(project_parity(e, Parity::odd).coefficients().cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(e.norm_squared() + o.norm_squared(), f.norm_squared(), 1e-12 * f.norm_squared());
  }
}

TEST(ExponentialSeries, PartialSums) {
  EXPECT_EQ(exponential_partial_sum(0, 0), cd(1.0, 0.0));
  EXPECT_EQ(exponential_partial_sum(0, 40), cd(1.0, 0.0));
  EXPECT_LT(std::abs(exponential_partial_sum(1, 50) - cd(-1.0, 0.0)), 1e-12);
  EXPECT_LT(std::abs(exponential_partial_sum(16, 200) - cd(1.0, 0.0)), 1e-8);
  const int need1 = terms_for_tolerance(1, 1e-8);
  const int need16 = terms_for_tolerance(16, 1e-8);
  EXPECT_GT(need16, 3 * need1);
  EXPECT_LE(need16, 200);
  RecordProperty("terms_m16_1e-8", need16);
}

TEST(ExponentialSeries, ConvergesToHalfTurn) {
  std::mt19937 rng(3);
  RadialGrid g(0.05, 2.0);
  const auto f = random_function(g, 4, rng);
  const auto a = truncated_exponential_series(f, 120);
  EXPECT_LT(max_diff(a, half_turn(f)), 1e-10);
  const auto z = truncated_exponential_series(f, 0);
  EXPECT_EQ(max_diff(z, f), 0.0);
}

TEST(Sectors, KeyedOnTotalSpin) {
  EXPECT_EQ(sector_parity(SpinSector::singlet), Parity::even);
  EXPECT_EQ(sector_parity(SpinSector::triplet), Parity::odd);
}

TEST(KernelApply, BranchesOnSingleHarmonics) {
  const auto& b = small_basis();
  RadialHamiltonian2D h(b.grid(), 4.0);
  AngularFunction odd(b.grid(), 4), even(b.grid(), 4);
  const auto g1 = b.values(1, 2);
  const auto g2 = b.values(2, 1);
  for (std::size_t i = 0; i < b.grid().size(); ++i) {
    odd.channel(1)(static_cast<Eigen::Index>(i)) = g1[i];
    even.channel(2)(static_cast<Eigen::Index>(i)) = g2[i];
  }
  const auto out_odd = peo_kernel_apply(h, SpinSector::triplet, odd);
  const auto expect = h.apply(1, g1);
  double err = 0.0;
  for (std::size_t i = 0; i < expect.size(); ++i) {
    err = std::max(err, std::abs(out_odd.channel(1)(static_cast<Eigen::Index>(i)) - expect[i]));
  }
  EXPECT_EQ(err, 0.0);
  EXPECT_EQ(peo_kernel_apply(h, SpinSector::triplet, even).coefficients().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(peo_kernel_apply(h, SpinSector::singlet, odd).coefficients().cwiseAbs().maxCoeff(), 0.0);
}

TEST(KernelApply, MatchesDenseOracleOnEightAngles) {
  RadialGrid g(0.05, 2.0);
  const auto n = static_cast<Eigen::Index>(g.size());
  RadialHamiltonian2D h(g, 4.0);
  std::mt19937 rng(5);
  const auto psi = random_function(g, 3, rng);

  // Radial channel matrices by applying the operator to unit vectors.
  auto channel_matrix = [&](int m) {
    Eigen::MatrixXd hm(n, n);
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index k = 0; k < n; ++k) {
      e[static_cast<std::size_t>(k)] = 1.0;
      const auto col = h.apply(m, e);
      for (Eigen::Index i = 0; i < n; ++i) hm(i, k) = col[static_cast<std::size_t>(i)];
      e[static_cast<std::size_t>(k)] = 0.0;
    }
    return hm;
  };
  constexpr int A = 8;
  const double inv = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  // Sample index (i, j) -> i * A + j; harmonics m = -3..4 resolved by the 8-point grid.
  Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(n * A, n * A);
  Eigen::MatrixXcd Hc = Eigen::MatrixXcd::Zero(n * A, n * A);
  for (int q = 0; q < A; ++q) {
    const int m = q - 3;
    const Eigen::MatrixXd hm = channel_matrix(m);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int j = 0; j < A; ++j) B(i * A + j, i * A + q) = std::polar(inv, m * 2.0 * std::numbers::pi * j / A);
      for (Eigen::Index k = 0; k < n; ++k) Hc(i * A + q, k * A + q) = hm(i, k);
    }
  }
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(n * A, n * A);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int j = 0; j < A; ++j) T(i * A + j, i * A + (j + A / 2) % A) = 1.0;
  }
  const Eigen::MatrixXcd Ao = 0.5 * (Eigen::MatrixXcd::Identity(n * A, n * A) - T);
  const Eigen::MatrixXcd dense = B * Hc * B.inverse() * Ao;

  std::vector<double> phi(A);
  for (int j = 0; j < A; ++j) phi[j] = 2.0 * std::numbers::pi * j / A;
  auto flatten = [&](const Eigen::MatrixXcd& s) {
    Eigen::VectorXcd v(n * A);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int j = 0; j < A; ++j) v(i * A + j) = s(i, j);
    }
    return v;
  };
  const Eigen::VectorXcd expect = dense * flatten(psi.sample(phi));
  const Eigen::VectorXcd got = flatten(peo_kernel_apply(h, SpinSector::triplet, psi).sample(phi));
  EXPECT_LT((expect - got).cwiseAbs().maxCoeff(), 1e-9 * expect.cwiseAbs().maxCoeff());
}

TEST(KernelApply, GridMismatch) {
  RadialHamiltonian2D h(RadialGrid(0.05, 2.0), 4.0);
  AngularFunction f(RadialGrid(0.05, 3.0), 1);
  EXPECT_THROW(peo_kernel_apply(h, SpinSector::singlet, f), InvalidInput);
}

TEST(KernelApply, DisjointSpectraOnTabulatedStates) {
  const auto& b = small_basis();
  RadialHamiltonian2D h(b.grid(), 4.0);
  const auto& grid = b.grid();
  for (int m = 0; m <= 4; ++m) {
    for (int n = 1; n <= 4; ++n) {
      AngularFunction u(grid, 4);
      const auto g = b.values(m, n);
      for (std::size_t i = 0; i < grid.size(); ++i) u.channel(m)(static_cast<Eigen::Index>(i)) = g[i];
      const auto out = peo_kernel_apply(h, SpinSector::triplet, u);
      if (m % 2 == 0) {
        EXPECT_EQ(out.coefficients().cwiseAbs().maxCoeff(), 0.0);
        continue;
      }
      std::vector<double> diff(grid.size()), eg(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        eg[i] = b.energy(m, n) * g[i];
        diff[i] = out.channel(m)(static_cast<Eigen::Index>(i)).real() - eg[i];
      }
      EXPECT_LT(std::sqrt(grid.inner(diff, diff) / grid.inner(eg, eg)), 1e-6) << m << "," << n;
    }
  }
}

TEST(Parity3D, SphericalHarmonicsUnderInversion) {
  for (int l = 0; l <= 4; ++l) {
    EXPECT_EQ(spatial_parity_3d(l), l % 2 == 0 ? 1 : -1);
    for (int m = -l; m <= l; ++m) {
      for (double th : {0.3, 1.1, 2.0}) {
        for (double ph : {0.2, 2.5}) {
          const auto a = boost::math::spherical_harmonic(l, m, th, ph);
          const auto b = boost::math::spherical_harmonic(l, m, std::numbers::pi - th, ph + std::numbers::pi);
          EXPECT_LT(std::abs(b - static_cast<double>(spatial_parity_3d(l)) * a), 1e-12);
        }
      }
    }
  }
}

TEST(SpectralSum, IsotropicShapeAndSymmetry) {
  const auto& b = small_basis();
  const std::vector<double> dphi = {0.0, std::numbers::pi / 2, std::numbers::pi};
  const auto se = spectral_peo_sum(b, Parity::even, 1.0, dphi);
  const auto so = spectral_peo_sum(b, Parity::odd, 1.0, dphi);
  EXPECT_EQ(se.truncation, 5 * 10);
  EXPECT_EQ(so.truncation, 4 * 10);
  const auto& grid = b.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_NEAR(se.values[2][i], se.values[0][i], 1e-12);
    EXPECT_NEAR(so.values[2][i], -so.values[0][i], 1e-12);
  }
  auto peak = [](const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); };
  EXPECT_LT(peak(se.values[1]), peak(se.values[0]));
  const auto at = std::max_element(se.values[0].begin(), se.values[0].end()) - se.values[0].begin();
  EXPECT_NEAR(grid.r(static_cast<std::size_t>(at)), 1.0, 0.1);
  const auto g01 = b.values(0, 1);
  EXPECT_LT(fwhm(se.abscissa, se.values[0]),
            fwhm(se.abscissa, std::vector<double>(g01.begin(), g01.end())));
}

TEST(SpectralSum, AnisotropicFullBlockEqualsIsotropicSum) {
  const auto& b = small_basis();
  aniso::BasisIndexMap map(4, 10);
  const auto spec = aniso::diagonalize(aniso::build_matrix(b, map, 1.4025), map);
  const std::vector<double> dphi = {0.0, 1.0, std::numbers::pi};
  for (Parity eta : {Parity::even, Parity::odd}) {
    const auto iso = spectral_peo_sum(b, eta, 1.0, dphi);
    const auto an = spectral_peo_sum(b, map, spec, eta, 1.0, dphi);
    EXPECT_EQ(iso.truncation, an.truncation);
    double err = 0.0, scale = 0.0;
    for (std::size_t a = 0; a < dphi.size(); ++a) {
      for (std::size_t i = 0; i < iso.abscissa.size(); ++i) {
        err = std::max(err, std::abs(iso.values[a][i] - an.values[a][i]));
        scale = std::max(scale, std::abs(iso.values[a][i]));
      }
    }
    EXPECT_LT(err, 1e-10 * scale);
    EXPECT_LT(an.imag_max, 1e-10 * scale);
  }
}

TEST(SpectralSum, EmptyParityClass) {
  auto t = radial::tabulate_basis(4.0, 0, 3, RadialGrid(0.01, 12.0));
  const std::vector<double> dphi = {0.0};
  EXPECT_THROW(spectral_peo_sum(t, Parity::odd, 1.0, dphi), InvalidInput);
}

TEST(Fwhm, Gaussian) {
  std::vector<double> x(2001), y(2001);
  for (int i = 0; i <= 2000; ++i) {
    x[i] = -5.0 + 0.005 * i;
    y[i] = std::exp(-0.5 * x[i] * x[i]);
  }
  EXPECT_NEAR(fwhm(x, y), 2.0 * std::sqrt(2.0 * std::log(2.0)), 1e-4);
}
