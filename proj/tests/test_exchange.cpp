#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <string>

#include "hooke/error.hpp"
#include "hooke/exchange.hpp"

using namespace hooke;
using namespace hooke::exchange;

namespace {

TwoParticleField gaussians(double centre, int n = 64) {
  return make_field(1, n, 4.0, [centre](std::span<const double> a, std::span<const double> b) {
    return cd(std::exp(-2.0 * (a[0] - centre) * (a[0] - centre)) *
                  std::exp(-2.0 * (b[0] + centre) * (b[0] + centre)),
              0.0);
  });
}

Eigen::MatrixXd random_one_body(int d, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd h(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b <= a; ++b) h(a, b) = h(b, a) = u(rng);
  }
  return h;
}

// Diagonal pair interaction symmetric under the label swap.
Eigen::MatrixXd random_pair(int d, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b <= a; ++b) v(a * d + b, a * d + b) = v(b * d + a, b * d + a) = u(rng);
  }
  return v;
}

// Heisenberg term J swapping the spins of two particles, labels a = site*2 + spin.
Eigen::MatrixXd heisenberg_pair(double j) {
  const int d = 6;
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const int a2 = (a / 2) * 2 + b % 2;
      const int b2 = (b / 2) * 2 + a % 2;
      v(a2 * d + b2, a * d + b) += j;
    }
  }
  return v;
}

Eigen::MatrixXd hopping_ring(int sites, int spins, double t) {
  const int d = sites * spins;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  for (int s = 0; s < sites; ++s) {
    const int s2 = (s + 1) % sites;
    for (int sp = 0; sp < spins; ++sp) {
      h(s * spins + sp, s2 * spins + sp) = h(s2 * spins + sp, s * spins + sp) = -t;
    }
  }
  return h;
}

}  // namespace

TEST(ExchangeExact, SwapAndInvolution) {
  const auto f = gaussians(0.5);
  const auto g = exchange_exact(f);
  const auto x = f.axis();
  for (int a = 0; a < f.n; ++a) {
    for (int b = 0; b < f.n; ++b) EXPECT_EQ(g.data[a * f.n + b], f.data[b * f.n + a]);
  }
  EXPECT_EQ(relative_l2(exchange_exact(g), f), 0.0);
  const auto sym = make_field(2, 8, 3.0, [](std::span<const double> a, std::span<const double> b) {
    return cd(std::exp(-(a[0] - b[0]) * (a[0] - b[0]) - a[1] * a[1] - b[1] * b[1]), 0.0);
  });
  EXPECT_EQ(relative_l2(exchange_exact(sym), sym), 0.0);
}

TEST(ExchangeExact, SwapsAxesInTwoDimensions) {
  const auto f = make_field(2, 8, 3.0, [](std::span<const double> a, std::span<const double> b) {
    return cd(a[0] + 2.0 * a[1], 3.0 * b[0] - b[1]);
  });
  const auto g = exchange_exact(f);
  const auto h = make_field(2, 8, 3.0, [](std::span<const double> a, std::span<const double> b) {
    return cd(b[0] + 2.0 * b[1], 3.0 * a[0] - a[1]);
  });
  EXPECT_EQ(relative_l2(g, h), 0.0);
}

TEST(ExchangeSeries, ZerothOrderIsIdentity) {
  const auto f = gaussians(0.5);
  EXPECT_LT(relative_l2(exchange_series(f, 0), f), 1e-14);
  const auto e = exchange_series_errors(f, 0);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_NEAR(e[0], relative_l2(f, exchange_exact(f)), 1e-14);
}

TEST(ExchangeSeries, IncrementalErrorsMatchDirectPartialSums) {
  const auto f = gaussians(0.5, 32);
  const auto exact = exchange_exact(f);
  const auto e = exchange_series_errors(f, 4);
  for (int n = 0; n <= 4; ++n) EXPECT_NEAR(e[n], relative_l2(exchange_series(f, n), exact), 1e-12 * e[n]);
}

TEST(ExchangeSeries, FirstOrderTermByHand) {
  // One term: i * (p1 - p2)(x1 - x2) f with p = -i d/dx gives (d1 - d2)[(x1 - x2) f].
  const double L = 4.0;
  const int n = 64;
  auto fn = [](double a, double b) {
    return std::exp(-2.0 * (a - 0.3) * (a - 0.3) - 2.0 * (b + 0.2) * (b + 0.2));
  };
  const auto f = make_field(1, n, L, [&](std::span<const double> a, std::span<const double> b) {
    return cd(fn(a[0], b[0]), 0.0);
  });
  const auto s = exchange_series(f, 1);
  const auto x = f.axis();
  double err = 0.0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double u = x[a], v = x[b];
      // d/du[(u - v) f] - d/dv[(u - v) f]
      const double fa = -4.0 * (u - 0.3) * fn(u, v);
      const double fb = -4.0 * (v + 0.2) * fn(u, v);
      const double term = 2.0 * fn(u, v) + (u - v) * (fa - fb);
      err = std::max(err, std::abs(s.data[a * n + b] - cd(fn(u, v) + term, 0.0)));
    }
  }
  EXPECT_LT(err, 1e-8);
}

TEST(ExchangeSeries, WiderSeparationIsWorse) {
  const auto near = exchange_series_errors(gaussians(0.5), 12);
  const auto far = exchange_series_errors(gaussians(2.0), 12);
  EXPECT_GT(far[12], near[12]);
}

TEST(ExchangeSeries, RequiresPeriodicGrid) {
  auto f = gaussians(0.5, 16);
  f.periodic = false;
  EXPECT_THROW(exchange_series(f, 2), InvalidInput);
  EXPECT_THROW(exchange_series(gaussians(0.5, 16), -1), InvalidInput);
}

TEST(SpinExchange, DefiningRelations) {
  // bit i set means particle i is down
  const auto uu = SpinConfig::basis_state(2, 0b00);
  const auto ud = SpinConfig::basis_state(2, 0b10);
  const auto du = SpinConfig::basis_state(2, 0b01);
  const auto dd = SpinConfig::basis_state(2, 0b11);
  EXPECT_EQ((spin_exchange(uu, 0, 1).amplitudes - uu.amplitudes).norm(), 0.0);
  EXPECT_EQ((spin_exchange(dd, 0, 1).amplitudes - dd.amplitudes).norm(), 0.0);
  EXPECT_EQ((spin_exchange(ud, 0, 1).amplitudes - du.amplitudes).norm(), 0.0);
  EXPECT_EQ((spin_exchange(du, 0, 1).amplitudes - ud.amplitudes).norm(), 0.0);
  for (const auto* s : {&uu, &ud, &du, &dd}) {
    EXPECT_LT((spin_exchange_formula(*s, 0, 1).amplitudes - spin_exchange(*s, 0, 1).amplitudes).norm(), 1e-12);
  }
  SpinConfig singlet{2, ud.amplitudes - du.amplitudes};
  singlet.normalize();
  EXPECT_LT((spin_exchange_formula(singlet, 0, 1).amplitudes + singlet.amplitudes).norm(), 1e-12);
}

TEST(SpinExchange, FormulaEqualsIndexSwapForThreeSpins) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const auto op = spin_exchange_operator(3, i, j);
      for (unsigned bits = 0; bits < 8; ++bits) {
        const auto s = SpinConfig::basis_state(3, bits);
        EXPECT_LT((op * s.amplitudes - spin_exchange(s, i, j).amplitudes).norm(), 1e-12);
      }
      EXPECT_LT((op * op - Eigen::MatrixXcd::Identity(8, 8)).norm(), 1e-12);
    }
  }
  EXPECT_THROW(spin_exchange(SpinConfig::basis_state(2, 0), 0, 0), InvalidInput);
  EXPECT_THROW(spin_exchange(SpinConfig::basis_state(2, 0), 0, 2), InvalidInput);
}

TEST(Chi, InvolutionAndFactorization) {
  ProductSpace s{2, 3, 2};
  const auto chi = permutation_matrix(chi_permutation(s, 0, 1));
  const auto pos = permutation_matrix(position_permutation(s, 0, 1));
  const auto spin = permutation_matrix(spin_permutation(s, 0, 1));
  const auto dim = static_cast<Eigen::Index>(s.dimension());
  EXPECT_EQ((chi * chi - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((pos * spin - chi).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((spin * pos - chi).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Chi, ProductOverAllPairsOnAntisymmetricStates) {
  ProductSpace s{3, 3, 1};
  const auto a = antisymmetrizer(s);
  const auto p1 = exchange_product(s, {{0, 1}, {0, 2}, {1, 2}});
  const auto p2 = exchange_product(s, {{1, 2}, {0, 2}, {0, 1}});
  // Three transpositions: an odd permutation, so -1 on the antisymmetric subspace.
  EXPECT_LT((p1 * a + a).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((p2 * a + a).cwiseAbs().maxCoeff(), 1e-14);
  // Both orderings reduce to the same transposition, so they agree on every state.
  EXPECT_EQ((p1 - p2).cwiseAbs().maxCoeff(), 0.0);
  const auto dim = static_cast<Eigen::Index>(s.dimension());
  EXPECT_EQ((p1 * p1 - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Antisymmetrizer, ProjectorWithBinomialRank) {
  ProductSpace s{3, 3, 2};
  const auto a = antisymmetrizer(s);
  EXPECT_LT((a * a - a).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((a - a.transpose()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(a.trace(), 20.0, 1e-12);
}

TEST(DiscretePEO, TwoParticlesEightSites) {
  std::mt19937 rng(17);
  ProductSpace s{2, 8, 1};
  const auto h = build_hamiltonian(s, random_one_body(8, rng), random_pair(8, rng));
  const auto peo = build_discrete_peo(h, s);
  EXPECT_EQ(peo.antisymmetric_count(), 28u);
  EXPECT_LT(peo.branch_residual, 1e-10);
  EXPECT_LT((peo.peo - peo.peo.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  const auto a = antisymmetrizer(s);
  for (Eigen::Index n = 0; n < peo.states.cols(); ++n) {
    const Eigen::VectorXd v = peo.states.col(n);
    if (peo.antisymmetric[static_cast<std::size_t>(n)]) {
      EXPECT_LT((peo.peo * v).norm(), 1e-10);
      EXPECT_LT(((h - peo.peo) * v - peo.energies(n) * v).norm(), 1e-10);
    } else {
      EXPECT_LT(((h - peo.peo) * v).norm(), 1e-10);
    }
  }
  // Dense oracle: H - PEO = H A.
  EXPECT_LT((h - peo.peo - h * a).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(DiscretePEO, PositiveSemidefiniteForNonNegativeSpectrum) {
  std::mt19937 rng(4);
  ProductSpace s{2, 4, 1};
  Eigen::MatrixXd h = build_hamiltonian(s, random_one_body(4, rng), random_pair(4, rng));
  h += 10.0 * Eigen::MatrixXd::Identity(h.rows(), h.cols());
  const auto peo = build_discrete_peo(h, s);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(peo.peo, Eigen::EigenvaluesOnly);
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-10);
}

TEST(DiscretePEO, ThreeFermionsWithSpinMatchAntisymmetrizer) {
  ProductSpace s{3, 3, 2};
  const auto h = build_hamiltonian(s, hopping_ring(3, 2, 1.0), heisenberg_pair(0.7));
  const auto peo = build_discrete_peo(h, s);
  const auto a = antisymmetrizer(s);
  EXPECT_EQ(peo.antisymmetric_count(), static_cast<std::size_t>(std::lround(a.trace())));
  EXPECT_LT(peo.branch_residual, 1e-10);
  for (Eigen::Index n = 0; n < peo.states.cols(); ++n) {
    const Eigen::VectorXd v = peo.states.col(n);
    const double target = peo.antisymmetric[static_cast<std::size_t>(n)] ? 1.0 : 0.0;
    EXPECT_LT((a * v - target * v).norm(), 1e-8);
  }
}

TEST(DiscretePEO, FullyDegenerateSpectrumStillClassifies) {
  // H = c I: one degenerate block containing every symmetry type.
  ProductSpace s{3, 3, 2};
  const auto dim = static_cast<Eigen::Index>(s.dimension());
  const Eigen::MatrixXd h = 2.5 * Eigen::MatrixXd::Identity(dim, dim);
  const auto peo = build_discrete_peo(h, s);
  const auto a = antisymmetrizer(s);
  EXPECT_EQ(peo.antisymmetric_count(), 20u);
  for (Eigen::Index n = 0; n < peo.states.cols(); ++n) {
    const Eigen::VectorXd v = peo.states.col(n);
    const double target = peo.antisymmetric[static_cast<std::size_t>(n)] ? 1.0 : 0.0;
    EXPECT_LT((a * v - target * v).norm(), 1e-8);
  }
  EXPECT_LT((peo.peo - 2.5 * (Eigen::MatrixXd::Identity(dim, dim) - a)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(DiscretePEO, RejectsNonExchangeSymmetricHamiltonian) {
  ProductSpace s{2, 3, 1};
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(9, 9);
  // Potential felt by particle 0 only.
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const std::vector<int> lab = {a, b};
      h(static_cast<Eigen::Index>(s.index(lab)), static_cast<Eigen::Index>(s.index(lab))) = a;
    }
  }
  try {
    build_discrete_peo(h, s);
    FAIL() << "expected an error";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("(0,1)"), std::string::npos) << e.what();
  }
  Eigen::MatrixXd asym = Eigen::MatrixXd::Zero(9, 9);
  asym(0, 1) = 1.0;
  EXPECT_THROW(build_discrete_peo(asym, s), InvalidInput);
}
