#include "hooke/aniso.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "hooke/error.hpp"
#include "hooke/parallel.hpp"

namespace hooke::aniso {

BasisIndexMap::BasisIndexMap(int m_max, int n_max) : m_max_(m_max), n_max_(n_max) {
  if (m_max < 0 || n_max < 1) throw InvalidInput("index map needs m_max >= 0 and n_max >= 1");
  for (int m = -m_max; m <= m_max; ++m) {
    for (int n = 1; n <= n_max; ++n) entries_.emplace_back(m, n);
  }
}

std::size_t BasisIndexMap::index(int m, int n) const {
  if (std::abs(m) > m_max_ || n < 1 || n > n_max_) {
    throw InvalidInput("(" + std::to_string(m) + "," + std::to_string(n) + ") not in the index map");
  }
  return static_cast<std::size_t>((m + m_max_) * n_max_ + (n - 1));
}

double anisotropy_q(double kx, double ky) { return 0.25 * (kx - ky); }

double radial_moment(const RadialGrid& ga, std::span<const double> a, const RadialGrid& gb,
                     std::span<const double> b) {
  if (!ga.same_as(gb)) throw InvalidInput("radial moment of profiles on different grids");
  if (a.size() != ga.size() || b.size() != gb.size()) throw InvalidInput("profile size mismatch");
  const auto w = ga.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = ga.r(i);
    s += w[i] * r * r * a[i] * b[i];
  }
  return s;
}

double radial_moment(const radial::BasisTable& basis, int m, int n, int m2, int n2) {
  return radial_moment(basis.grid(), basis.values(m, n), basis.grid(), basis.values(m2, n2));
}

double angular_factor(int m, int m2) {
  if (m == m2) return 0.5;
  if (m == m2 + 2 || m == m2 - 2) return 0.25;
  return 0.0;
}

Eigen::MatrixXd build_matrix(const radial::BasisTable& basis, const BasisIndexMap& map, double q) {
  if (map.m_max() > basis.m_max() || map.n_max() > basis.n_max()) {
    throw InvalidInput("index map exceeds the radial basis");
  }
  const int nn = map.n_max();
  const auto npts = static_cast<Eigen::Index>(basis.grid().size());
  const int mm = map.m_max();

  // Profiles per |m| with the r^3 dr quadrature folded into one side.
  std::vector<Eigen::MatrixXd> G(static_cast<std::size_t>(mm + 1));
  std::vector<Eigen::MatrixXd> GW(static_cast<std::size_t>(mm + 1));
  const auto w = basis.grid().weights();
  for (int am = 0; am <= mm; ++am) {
    Eigen::MatrixXd g(npts, nn);
    for (int n = 1; n <= nn; ++n) {
      const auto v = basis.values(am, n);
      for (Eigen::Index i = 0; i < npts; ++i) g(i, n - 1) = v[i];
    }
    Eigen::MatrixXd gw = g;
    for (Eigen::Index i = 0; i < npts; ++i) {
      const double r = basis.grid().r(static_cast<std::size_t>(i));
      gw.row(i) *= w[i] * r * r;
    }
    G[am] = std::move(g);
    GW[am] = std::move(gw);
  }
  // Moment blocks for |m'| - |m| in {0, 2} (|m| = |m'| also covers m' = -m).
  std::vector<Eigen::MatrixXd> same(static_cast<std::size_t>(mm + 1));
  std::vector<Eigen::MatrixXd> up(static_cast<std::size_t>(mm + 1));
  parallel_for(static_cast<std::size_t>(mm + 1), [&](std::size_t am) {
    Eigen::MatrixXd s = GW[am].transpose() * G[am];
    same[am] = 0.5 * (s + s.transpose());
    if (am + 2 <= static_cast<std::size_t>(mm)) up[am] = GW[am].transpose() * G[am + 2];
  });
  auto moment = [&](int m, int m2) -> Eigen::MatrixXd {
    const int a = std::abs(m), b = std::abs(m2);
    if (a == b) return same[a];
    if (b == a + 2) return up[a];
    return up[b].transpose();
  };

  const auto dim = static_cast<Eigen::Index>(map.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int m = -mm; m <= mm; ++m) {
    for (int m2 = m; m2 <= std::min(mm, m + 2); m2 += 2) {
      const double c = angular_factor(m, m2);
      const Eigen::MatrixXd blk = q * c * moment(m, m2);
      const auto r0 = static_cast<Eigen::Index>(map.index(m, 1));
      const auto c0 = static_cast<Eigen::Index>(map.index(m2, 1));
      h.block(r0, c0, nn, nn) += blk;
      if (m2 != m) h.block(c0, r0, nn, nn) += blk.transpose();
    }
    const auto r0 = static_cast<Eigen::Index>(map.index(m, 1));
    for (int n = 1; n <= nn; ++n) h(r0 + n - 1, r0 + n - 1) += basis.energy(m, n);
  }
  return h;
}

AnisoSpectrum diagonalize(const Eigen::MatrixXd& h, const BasisIndexMap& map) {
  if (h.rows() != h.cols() || static_cast<std::size_t>(h.rows()) != map.size()) {
    throw InvalidInput("matrix does not match the index map");
  }
  const auto dim = h.rows();
  struct Block {
    Parity parity;
    std::vector<Eigen::Index> idx;
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
  };
  std::vector<Block> blocks = {{Parity::even, {}, {}, {}}, {Parity::odd, {}, {}, {}}};
  for (Eigen::Index i = 0; i < dim; ++i) {
    const int m = map.m(static_cast<std::size_t>(i));
    blocks[(m % 2 == 0) ? 0 : 1].idx.push_back(i);
  }
  for (auto& b : blocks) {
    const auto n = static_cast<Eigen::Index>(b.idx.size());
    if (n == 0) continue;
    Eigen::MatrixXd sub(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
      for (Eigen::Index c = 0; c < n; ++c) sub(a, c) = h(b.idx[a], b.idx[c]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub);
    if (es.info() != Eigen::Success) throw RangeError("symmetric eigensolver failed");
    b.values = es.eigenvalues();
    b.vectors = es.eigenvectors();
  }
  struct Item {
    double e;
    int block;
    Eigen::Index col;
  };
  std::vector<Item> items;
  for (int bi = 0; bi < 2; ++bi) {
    for (Eigen::Index c = 0; c < blocks[bi].values.size(); ++c) {
      items.push_back({blocks[bi].values(c), bi, c});
    }
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& a, const Item& b) { return a.e < b.e; });

  AnisoSpectrum s;
  s.energies.resize(dim);
  s.vectors = Eigen::MatrixXd::Zero(dim, dim);
  s.parity.resize(static_cast<std::size_t>(dim));
  const double hnorm = std::max(h.norm(), 1e-300);
  for (Eigen::Index l = 0; l < dim; ++l) {
    const Item& it = items[static_cast<std::size_t>(l)];
    const Block& b = blocks[it.block];
    s.energies(l) = it.e;
    s.parity[static_cast<std::size_t>(l)] = b.parity;
    for (std::size_t a = 0; a < b.idx.size(); ++a) {
      s.vectors(b.idx[a], l) = b.vectors(static_cast<Eigen::Index>(a), it.col);
    }
  }
  const Eigen::MatrixXd resid = h * s.vectors - s.vectors * s.energies.asDiagonal();
  s.max_residual = resid.colwise().norm().maxCoeff() / hnorm;
  return s;
}

std::size_t count_parity(const AnisoSpectrum& s, Parity p) {
  return static_cast<std::size_t>(std::count(s.parity.begin(), s.parity.end(), p));
}

}  // namespace hooke::aniso
