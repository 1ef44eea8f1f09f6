#include "hooke/peo.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "hooke/error.hpp"
#include "hooke/parallel.hpp"

namespace hooke::peo {

namespace {

using cd = std::complex<double>;

// Fornberg's recursion: weights for derivatives 0..2 at z over nodes x.
std::array<std::array<double, 9>, 3> fornberg(double z, const std::array<double, 9>& x) {
  constexpr int n = 9;
  constexpr int order = 2;
  std::array<std::array<double, 9>, 3> w{};
  double c1 = 1.0;
  double c4 = x[0] - z;
  w[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          w[k][i] = c1 * (k * w[k - 1][i - 1] - c5 * w[k][i - 1]) / c2;
        }
        w[0][i] = -c1 * c5 * w[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) w[k][j] = (c4 * w[k][j] - k * w[k - 1][j]) / c3;
      w[0][j] = c4 * w[0][j] / c3;
    }
    c1 = c2;
  }
  return w;
}

void check_parity(int m_max) {
  if (m_max < 0) throw InvalidInput("angular bandwidth must be non-negative");
}

int wrap_parity(int m) { return ((m % 2) + 2) % 2; }

}  // namespace

Parity sector_parity(SpinSector s) { return s == SpinSector::singlet ? Parity::even : Parity::odd; }

AngularFunction::AngularFunction(RadialGrid grid, int m_max)
    : grid_(std::move(grid)), m_max_(m_max) {
  check_parity(m_max);
  c_ = Eigen::MatrixXcd::Zero(2 * m_max + 1, static_cast<Eigen::Index>(grid_.size()));
}

double AngularFunction::norm_squared() const {
  double s = 0.0;
  const auto w = grid_.weights();
  for (Eigen::Index m = 0; m < c_.rows(); ++m) {
    for (Eigen::Index i = 0; i < c_.cols(); ++i) s += w[i] * std::norm(c_(m, i));
  }
  return s;
}

Eigen::MatrixXcd AngularFunction::sample(std::span<const double> phi) const {
  Eigen::MatrixXcd basis(c_.rows(), static_cast<Eigen::Index>(phi.size()));
  const double inv = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  for (int m = -m_max_; m <= m_max_; ++m) {
    for (std::size_t j = 0; j < phi.size(); ++j) {
      basis(m + m_max_, static_cast<Eigen::Index>(j)) = std::polar(inv, m * phi[j]);
    }
  }
  return c_.transpose() * basis;
}

AngularFunction half_turn(const AngularFunction& f) {
  AngularFunction out = f;
  for (int m = -f.m_max(); m <= f.m_max(); ++m) {
    if (wrap_parity(m) == 1) out.channel(m) = -f.channel(m);
  }
  return out;
}

AngularFunction project_parity(const AngularFunction& f, Parity eta) {
  AngularFunction out = f;
  const int keep = eta == Parity::even ? 0 : 1;
  for (int m = -f.m_max(); m <= f.m_max(); ++m) {
    if (wrap_parity(m) != keep) out.channel(m).setZero();
  }
  return out;
}

namespace {

// Partial sums S_0..S_N of sum_n (-i pi m)^n / n!.
std::vector<cd> partial_sums(int m, int N) {
  using big = boost::multiprecision::cpp_bin_float_50;
  const big a = -boost::math::constants::pi<big>() * m;
  big re = 1, im = 0;
  big tre = 1, tim = 0;
  std::vector<cd> out;
  out.reserve(static_cast<std::size_t>(N) + 1);
  out.emplace_back(1.0, 0.0);
  for (int n = 1; n <= N; ++n) {
    // multiply the term by (i a)/n
    const big nre = -tim * a / n;
    const big nim = tre * a / n;
    tre = nre;
    tim = nim;
    re += tre;
    im += tim;
    out.emplace_back(static_cast<double>(re), static_cast<double>(im));
  }
  return out;
}

}  // namespace

std::complex<double> exponential_partial_sum(int m, int N) {
  if (N < 0) throw InvalidInput("series order must be non-negative");
  return partial_sums(m, N).back();
}

// Even m gives S_0 = 1 exactly, so the first hit is not enough: every later
// partial sum must also stay within tol.
int terms_for_tolerance(int m, double tol, int max_terms) {
  const double target = wrap_parity(m) == 0 ? 1.0 : -1.0;
  const auto s = partial_sums(m, max_terms);
  int n = max_terms;
  if (std::abs(s[static_cast<std::size_t>(n)] - target) >= tol) return -1;
  while (n > 0 && std::abs(s[static_cast<std::size_t>(n - 1)] - target) < tol) --n;
  return n;
}

AngularFunction truncated_exponential_series(const AngularFunction& f, int N) {
  if (N < 0) throw InvalidInput("series order must be non-negative");
  AngularFunction out = f;
  for (int m = -f.m_max(); m <= f.m_max(); ++m) {
    out.channel(m) = f.channel(m) * exponential_partial_sum(m, N);
  }
  return out;
}

RadialHamiltonian2D::RadialHamiltonian2D(RadialGrid grid, double k, bool interaction)
    : grid_(std::move(grid)), k_(k), interaction_(interaction) {
  if (grid_.dimension() != Dimension::two) throw InvalidInput("2D Hamiltonian needs a 2D grid");
  const std::size_t n = grid_.size();
  start_.resize(n);
  d1_.resize(n);
  d2_.resize(n);
  const double h = grid_.step();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(i) - 4, 0,
                                                     static_cast<std::ptrdiff_t>(n) - 9);
    start_[i] = s;
    std::array<double, 9> x{};
    for (int j = 0; j < 9; ++j) x[j] = (static_cast<double>(s + j) - static_cast<double>(i));
    const auto w = fornberg(0.0, x);
    for (int j = 0; j < 9; ++j) {
      d1_[i][j] = w[1][j] / h;
      d2_[i][j] = w[2][j] / (h * h);
    }
  }
}

std::vector<double> RadialHamiltonian2D::apply(int m, std::span<const double> g) const {
  if (g.size() != grid_.size()) throw InvalidInput("profile does not match the Hamiltonian grid");
  const std::size_t n = g.size();
  const double cent = static_cast<double>(m) * m;
  const double c = interaction_ ? 1.0 : 0.0;
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double d1 = 0.0, d2 = 0.0;
    for (int j = 0; j < 9; ++j) {
      d1 += d1_[i][j] * g[start_[i] + j];
      d2 += d2_[i][j] * g[start_[i] + j];
    }
    const double r = grid_.r(i);
    out[i] = -d2 - d1 / r + (cent / (r * r) + c / r + 0.25 * k_ * r * r) * g[i];
  }
  // The origin is singular term by term; extrapolate from the interior.
  if (n > 7) {
    double acc = 0.0;
    for (int j = 1; j <= 6; ++j) {
      double l = 1.0;
      for (int q = 1; q <= 6; ++q) {
        if (q != j) l *= (0.0 - q) / static_cast<double>(j - q);
      }
      acc += l * out[static_cast<std::size_t>(j)];
    }
    out[0] = acc;
  }
  return out;
}

AngularFunction peo_kernel_apply(const RadialHamiltonian2D& h, SpinSector spin,
                                 const AngularFunction& psi) {
  if (!psi.grid().same_as(h.grid())) throw InvalidInput("wave function and Hamiltonian grids differ");
  AngularFunction projected = project_parity(psi, sector_parity(spin));
  AngularFunction out(psi.grid(), psi.m_max());
  const auto n = static_cast<Eigen::Index>(psi.grid().size());
  std::vector<double> re(n), im(n);
  for (int m = -psi.m_max(); m <= psi.m_max(); ++m) {
    auto row = projected.channel(m);
    if (row.isZero(0.0)) continue;
    for (Eigen::Index i = 0; i < n; ++i) {
      re[i] = row(i).real();
      im[i] = row(i).imag();
    }
    const auto hr = h.apply(m, re);
    const auto hi = h.apply(m, im);
    for (Eigen::Index i = 0; i < n; ++i) out.channel(m)(i) = cd(hr[i], hi[i]);
  }
  return out;
}

int spatial_parity_3d(int l) { return (l % 2 == 0) ? 1 : -1; }

namespace {

SpectralSum prepare(const radial::BasisTable& basis, Parity eta, double r_ref,
                    std::span<const double> dphi) {
  const RadialGrid& g = basis.grid();
  if (!(r_ref >= 0.0 && r_ref <= g.r_max())) throw InvalidInput("r_ref outside the radial grid");
  SpectralSum s;
  s.label = parity_name(eta);
  s.reference_index = g.nearest_index(r_ref);
  s.reference = g.r(s.reference_index);
  s.abscissa.assign(g.points().begin(), g.points().end());
  s.angles.assign(dphi.begin(), dphi.end());
  s.values.assign(dphi.size(), std::vector<double>(g.size(), 0.0));
  return s;
}

}  // namespace

SpectralSum spectral_peo_sum(const radial::BasisTable& basis, Parity eta, double r_ref,
                             std::span<const double> dphi) {
  SpectralSum s = prepare(basis, eta, r_ref, dphi);
  const int want = eta == Parity::even ? 0 : 1;
  const std::size_t npts = basis.grid().size();
  const double inv2pi = 0.5 / std::numbers::pi;
  // Radial kernels K_m(r) = sum_n g_{m,n}(r) g_{m,n}(r_ref), one per |m|.
  std::vector<std::vector<double>> kern(static_cast<std::size_t>(basis.m_max() + 1));
  parallel_for(kern.size(), [&](std::size_t am) {
    std::vector<double> acc(npts, 0.0);
    if (wrap_parity(static_cast<int>(am)) == want) {
      for (int n = 1; n <= basis.n_max(); ++n) {
        const auto g = basis.values(static_cast<int>(am), n);
        const double at = g[s.reference_index];
        for (std::size_t i = 0; i < npts; ++i) acc[i] += g[i] * at;
      }
    }
    kern[am] = std::move(acc);
  });
  int states = 0;
  for (int m = -basis.m_max(); m <= basis.m_max(); ++m) {
    if (wrap_parity(m) == want) states += basis.n_max();
  }
  if (states == 0) throw InvalidInput("no basis states in the requested parity class");
  s.truncation = states;
  for (std::size_t a = 0; a < dphi.size(); ++a) {
    auto& row = s.values[a];
    for (int m = -basis.m_max(); m <= basis.m_max(); ++m) {
      if (wrap_parity(m) != want) continue;
      const double cs = std::cos(m * dphi[a]) * inv2pi;
      const auto& k = kern[static_cast<std::size_t>(std::abs(m))];
      for (std::size_t i = 0; i < npts; ++i) row[i] += cs * k[i];
    }
  }
  return s;
}

SpectralSum spectral_peo_sum(const radial::BasisTable& basis, const aniso::BasisIndexMap& map,
                             const aniso::AnisoSpectrum& spectrum, Parity eta, double r_ref,
                             std::span<const double> dphi) {
  if (map.m_max() > basis.m_max() || map.n_max() > basis.n_max()) {
    throw InvalidInput("index map exceeds the radial basis");
  }
  if (static_cast<std::size_t>(spectrum.vectors.rows()) != map.size()) {
    throw InvalidInput("eigenvectors do not match the index map");
  }
  SpectralSum s = prepare(basis, eta, r_ref, dphi);
  std::vector<Eigen::Index> cols;
  for (std::size_t l = 0; l < spectrum.parity.size(); ++l) {
    if (spectrum.parity[l] == eta) cols.push_back(static_cast<Eigen::Index>(l));
  }
  if (cols.empty()) throw InvalidInput("no anisotropic states in the requested parity class");
  s.truncation = static_cast<int>(cols.size());
  const auto npts = static_cast<Eigen::Index>(basis.grid().size());
  const int mm = map.m_max();
  const int nn = map.n_max();
  const auto L = static_cast<Eigen::Index>(cols.size());

  // F_m(r, l) = sum_n a_{(m,n),l} g_{m,n}(r).
  std::vector<Eigen::MatrixXd> F(static_cast<std::size_t>(2 * mm + 1));
  parallel_for(F.size(), [&](std::size_t mi) {
    const int m = static_cast<int>(mi) - mm;
    Eigen::MatrixXd G(npts, nn);
    for (int n = 1; n <= nn; ++n) {
      const auto g = basis.values(m, n);
      for (Eigen::Index i = 0; i < npts; ++i) G(i, n - 1) = g[i];
    }
    Eigen::MatrixXd A(nn, L);
    for (int n = 1; n <= nn; ++n) {
      const auto row = static_cast<Eigen::Index>(map.index(m, n));
      for (Eigen::Index l = 0; l < L; ++l) A(n - 1, l) = spectrum.vectors(row, cols[l]);
    }
    F[mi] = G * A;
  });
  Eigen::VectorXd t = Eigen::VectorXd::Zero(L);
  const auto ref = static_cast<Eigen::Index>(s.reference_index);
  for (const auto& f : F) t += f.row(ref).transpose();
  std::vector<Eigen::VectorXd> Ft(F.size());
  for (std::size_t mi = 0; mi < F.size(); ++mi) Ft[mi] = F[mi] * t;

  const double inv2pi = 0.5 / std::numbers::pi;
  for (std::size_t a = 0; a < dphi.size(); ++a) {
    auto& row = s.values[a];
    std::vector<double> imag(static_cast<std::size_t>(npts), 0.0);
    for (std::size_t mi = 0; mi < F.size(); ++mi) {
      const int m = static_cast<int>(mi) - mm;
      const double cs = std::cos(m * dphi[a]) * inv2pi;
      const double sn = -std::sin(m * dphi[a]) * inv2pi;
      for (Eigen::Index i = 0; i < npts; ++i) {
        row[i] += cs * Ft[mi](i);
        imag[i] += sn * Ft[mi](i);
      }
    }
    for (double v : imag) s.imag_max = std::max(s.imag_max, std::abs(v));
  }
  return s;
}

double fwhm(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) throw InvalidInput("fwhm needs matching samples");
  const auto peak_it = std::max_element(y.begin(), y.end());
  const std::size_t p = static_cast<std::size_t>(peak_it - y.begin());
  const double half = 0.5 * *peak_it;
  if (!(half > 0.0)) throw InvalidInput("fwhm needs a positive peak");
  double left = x.front();
  for (std::size_t i = p; i > 0; --i) {
    if (y[i - 1] < half) {
      left = x[i - 1] + (half - y[i - 1]) / (y[i] - y[i - 1]) * (x[i] - x[i - 1]);
      break;
    }
  }
  double right = x.back();
  for (std::size_t i = p; i + 1 < y.size(); ++i) {
    if (y[i + 1] < half) {
      right = x[i] + (y[i] - half) / (y[i] - y[i + 1]) * (x[i + 1] - x[i]);
      break;
    }
  }
  return right - left;
}

}  // namespace hooke::peo
