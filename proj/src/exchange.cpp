#include "hooke/exchange.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "hooke/error.hpp"

namespace hooke::exchange {

namespace {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void check_field(const TwoParticleField& f) {
  if (f.dim < 1 || f.dim > 3) throw InvalidInput("field dimension must be 1, 2 or 3");
  if (f.n < 2) throw InvalidInput("field needs at least two points per axis");
  if (f.data.size() != f.per_particle() * f.per_particle()) {
    throw InvalidInput("field storage does not match its grid");
  }
}

// Coordinate of particle p (0 or 1) along axis a at flattened index idx.
int axis_index(const TwoParticleField& f, std::size_t idx, int p, int a) {
  const int slot = p * f.dim + a;
  const int slots = 2 * f.dim;
  std::size_t stride = ipow(static_cast<std::size_t>(f.n), slots - 1 - slot);
  return static_cast<int>((idx / stride) % static_cast<std::size_t>(f.n));
}

class FftPair {
 public:
  explicit FftPair(const TwoParticleField& f) : size_(f.data.size()) {
    buf_ = fftw_alloc_complex(size_);
    std::vector<int> dims(static_cast<std::size_t>(2 * f.dim), f.n);
    fwd_ = fftw_plan_dft(2 * f.dim, dims.data(), buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft(2 * f.dim, dims.data(), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  ~FftPair() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(buf_);
  }
  FftPair(const FftPair&) = delete;
  FftPair& operator=(const FftPair&) = delete;

  cd* data() { return reinterpret_cast<cd*>(buf_); }
  void forward() { fftw_execute(fwd_); }
  void inverse() { fftw_execute(inv_); }

 private:
  std::size_t size_;
  fftw_complex* buf_;
  fftw_plan fwd_;
  fftw_plan inv_;
};

// All multi-indices of length d with total degree t.
void compositions(int d, int t, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == d - 1) {
    cur.push_back(t);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int e = t; e >= 0; --e) {
    cur.push_back(e);
    compositions(d, t - e, cur, out);
    cur.pop_back();
  }
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Accumulates successive total-degree shells of the series.
class SeriesEngine {
 public:
  explicit SeriesEngine(const TwoParticleField& f) : f_(f), fft_(f) {
    const std::vector<double> x = f.axis();
    const double L = 2.0 * f.half_width;
    const std::size_t n = static_cast<std::size_t>(f.n);
    kappa_.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
      const long j = static_cast<long>(a) <= static_cast<long>(n / 2) ? static_cast<long>(a)
                                                                      : static_cast<long>(a) - static_cast<long>(n);
      kappa_[a] = (n % 2 == 0 && a == n / 2) ? 0.0 : 2.0 * std::numbers::pi * j / L;
    }
    const std::size_t total = f.data.size();
    dr_.assign(static_cast<std::size_t>(f.dim), std::vector<double>(total));
    dk_.assign(static_cast<std::size_t>(f.dim), std::vector<double>(total));
    for (std::size_t idx = 0; idx < total; ++idx) {
      for (int a = 0; a < f.dim; ++a) {
        const int i1 = axis_index(f, idx, 0, a);
        const int i2 = axis_index(f, idx, 1, a);
        dr_[a][idx] = x[i2] - x[i1];
        dk_[a][idx] = kappa_[i2] - kappa_[i1];
      }
    }
  }

  // Adds every term of total degree t into acc.
  void add_shell(int t, std::vector<cd>& acc) {
    std::vector<std::vector<int>> shell;
    std::vector<int> cur;
    compositions(f_.dim, t, cur, shell);
    const std::size_t total = f_.data.size();
    const cd it = std::pow(cd(0.0, 1.0), t);
    for (const auto& e : shell) {
      double denom = 1.0;
      for (int v : e) denom *= factorial(v);
      cd* buf = fft_.data();
      for (std::size_t idx = 0; idx < total; ++idx) {
        double p = 1.0;
        for (int a = 0; a < f_.dim; ++a) p *= std::pow(dr_[a][idx], e[a]);
        buf[idx] = f_.data[idx] * p;
      }
      fft_.forward();
      for (std::size_t idx = 0; idx < total; ++idx) {
        double p = 1.0;
        for (int a = 0; a < f_.dim; ++a) p *= std::pow(dk_[a][idx], e[a]);
        buf[idx] *= p;
      }
      fft_.inverse();
      const cd scale = it / (denom * static_cast<double>(total));
      for (std::size_t idx = 0; idx < total; ++idx) acc[idx] += scale * buf[idx];
    }
  }

 private:
  const TwoParticleField& f_;
  FftPair fft_;
  std::vector<double> kappa_;
  std::vector<std::vector<double>> dr_;
  std::vector<std::vector<double>> dk_;
};

}  // namespace

std::size_t TwoParticleField::per_particle() const { return ipow(static_cast<std::size_t>(n), dim); }

std::vector<double> TwoParticleField::axis() const {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) x[a] = -half_width + 2.0 * half_width * a / n;
  return x;
}

TwoParticleField make_field(int dim, int n, double half_width, const PairFunction& fn) {
  TwoParticleField f;
  f.dim = dim;
  f.n = n;
  f.half_width = half_width;
  if (dim < 1 || dim > 3 || n < 2 || !(half_width > 0.0)) {
    throw InvalidInput("bad two-particle grid");
  }
  const std::size_t total = f.per_particle() * f.per_particle();
  f.data.resize(total);
  const std::vector<double> x = f.axis();
  std::vector<double> x1(static_cast<std::size_t>(dim)), x2(static_cast<std::size_t>(dim));
  for (std::size_t idx = 0; idx < total; ++idx) {
    for (int a = 0; a < dim; ++a) {
      x1[a] = x[axis_index(f, idx, 0, a)];
      x2[a] = x[axis_index(f, idx, 1, a)];
    }
    f.data[idx] = fn(x1, x2);
  }
  return f;
}

TwoParticleField exchange_exact(const TwoParticleField& f) {
  check_field(f);
  TwoParticleField out = f;
  const std::size_t p = f.per_particle();
  for (std::size_t a = 0; a < p; ++a) {
    for (std::size_t b = 0; b < p; ++b) out.data[a * p + b] = f.data[b * p + a];
  }
  return out;
}

TwoParticleField exchange_series(const TwoParticleField& f, int order) {
  check_field(f);
  if (!f.periodic) throw InvalidInput("series exchange needs a periodic grid");
  if (order < 0) throw InvalidInput("series order must be non-negative");
  SeriesEngine engine(f);
  TwoParticleField out = f;
  std::fill(out.data.begin(), out.data.end(), cd(0.0));
  for (int t = 0; t <= order; ++t) engine.add_shell(t, out.data);
  return out;
}

std::vector<double> exchange_series_errors(const TwoParticleField& f, int max_order) {
  check_field(f);
  if (!f.periodic) throw InvalidInput("series exchange needs a periodic grid");
  if (max_order < 0) throw InvalidInput("series order must be non-negative");
  const TwoParticleField exact = exchange_exact(f);
  SeriesEngine engine(f);
  TwoParticleField acc = f;
  std::fill(acc.data.begin(), acc.data.end(), cd(0.0));
  std::vector<double> errs;
  for (int t = 0; t <= max_order; ++t) {
    engine.add_shell(t, acc.data);
    errs.push_back(relative_l2(acc, exact));
  }
  return errs;
}

double relative_l2(const TwoParticleField& a, const TwoParticleField& b) {
  if (a.data.size() != b.data.size()) throw InvalidInput("field size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    num += std::norm(a.data[i] - b.data[i]);
    den += std::norm(b.data[i]);
  }
  return std::sqrt(num / den);
}

SpinConfig SpinConfig::basis_state(int k, unsigned bits) {
  if (k < 1 || k > 16) throw InvalidInput("spin count out of range");
  SpinConfig c;
  c.k = k;
  c.amplitudes = Eigen::VectorXcd::Zero(1 << k);
  if (bits >= (1u << k)) throw InvalidInput("spin basis index out of range");
  c.amplitudes(bits) = 1.0;
  return c;
}

void SpinConfig::normalize() {
  const double n = amplitudes.norm();
  if (n > 0.0) amplitudes /= n;
}

namespace {

void check_pair(int k, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= k || j >= k) {
    throw InvalidInput("spin pair (" + std::to_string(i) + "," + std::to_string(j) +
                       ") out of range");
  }
}

// s_alpha acting on particle p of k spins.
Eigen::MatrixXcd spin_component(int k, int p, int alpha) {
  const int dim = 1 << k;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(dim, dim);
  const unsigned bit = 1u << p;
  for (int b = 0; b < dim; ++b) {
    const bool down = (static_cast<unsigned>(b) & bit) != 0;
    const int flipped = static_cast<int>(static_cast<unsigned>(b) ^ bit);
    switch (alpha) {
      case 0:
        s(flipped, b) = 0.5;
        break;
      case 1:
        // sigma_y |up> = i |down>, sigma_y |down> = -i |up>
        s(flipped, b) = down ? cd(0.0, -0.5) : cd(0.0, 0.5);
        break;
      default:
        s(b, b) = down ? -0.5 : 0.5;
    }
  }
  return s;
}

}  // namespace

SpinConfig spin_exchange(const SpinConfig& cfg, int i, int j) {
  check_pair(cfg.k, i, j);
  SpinConfig out = cfg;
  const unsigned bi = 1u << i, bj = 1u << j;
  for (unsigned b = 0; b < (1u << cfg.k); ++b) {
    unsigned s = b & ~(bi | bj);
    if (b & bi) s |= bj;
    if (b & bj) s |= bi;
    out.amplitudes(s) = cfg.amplitudes(b);
  }
  return out;
}

Eigen::MatrixXcd spin_exchange_operator(int k, int i, int j) {
  check_pair(k, i, j);
  const int dim = 1 << k;
  Eigen::MatrixXcd op = 0.5 * Eigen::MatrixXcd::Identity(dim, dim);
  for (int alpha = 0; alpha < 3; ++alpha) {
    op += 2.0 * spin_component(k, i, alpha) * spin_component(k, j, alpha);
  }
  return op;
}

SpinConfig spin_exchange_formula(const SpinConfig& cfg, int i, int j) {
  SpinConfig out = cfg;
  out.amplitudes = spin_exchange_operator(cfg.k, i, j) * cfg.amplitudes;
  return out;
}

std::size_t ProductSpace::dimension() const {
  return ipow(static_cast<std::size_t>(single()), particles);
}

std::vector<int> ProductSpace::labels(std::size_t index) const {
  std::vector<int> l(static_cast<std::size_t>(particles));
  const auto d = static_cast<std::size_t>(single());
  for (int p = particles - 1; p >= 0; --p) {
    l[p] = static_cast<int>(index % d);
    index /= d;
  }
  return l;
}

std::size_t ProductSpace::index(std::span<const int> l) const {
  std::size_t idx = 0;
  for (int v : l) idx = idx * static_cast<std::size_t>(single()) + static_cast<std::size_t>(v);
  return idx;
}

namespace {

template <class Swap>
std::vector<std::size_t> label_permutation(const ProductSpace& s, int i, int j, Swap swap) {
  if (i == j || i < 0 || j < 0 || i >= s.particles || j >= s.particles) {
    throw InvalidInput("particle pair (" + std::to_string(i) + "," + std::to_string(j) +
                       ") out of range");
  }
  std::vector<std::size_t> perm(s.dimension());
  for (std::size_t b = 0; b < perm.size(); ++b) {
    std::vector<int> l = s.labels(b);
    swap(l[i], l[j]);
    perm[b] = s.index(l);
  }
  return perm;
}

}  // namespace

std::vector<std::size_t> chi_permutation(const ProductSpace& s, int i, int j) {
  return label_permutation(s, i, j, [](int& a, int& b) { std::swap(a, b); });
}

std::vector<std::size_t> position_permutation(const ProductSpace& s, int i, int j) {
  const int sp = s.spins;
  return label_permutation(s, i, j, [sp](int& a, int& b) {
    const int sa = a / sp, sb = b / sp;
    a = sb * sp + a % sp;
    b = sa * sp + b % sp;
  });
}

std::vector<std::size_t> spin_permutation(const ProductSpace& s, int i, int j) {
  const int sp = s.spins;
  return label_permutation(s, i, j, [sp](int& a, int& b) {
    const int ta = a % sp, tb = b % sp;
    a = (a / sp) * sp + tb;
    b = (b / sp) * sp + ta;
  });
}

Eigen::MatrixXd permutation_matrix(const std::vector<std::size_t>& perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index b = 0; b < n; ++b) p(static_cast<Eigen::Index>(perm[b]), b) = 1.0;
  return p;
}

Eigen::MatrixXd exchange_product(const ProductSpace& s,
                                 const std::vector<std::pair<int, int>>& pairs) {
  const auto n = static_cast<Eigen::Index>(s.dimension());
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n);
  for (const auto& [i, j] : pairs) m = m * permutation_matrix(chi_permutation(s, i, j));
  return m;
}

Eigen::MatrixXd antisymmetrizer(const ProductSpace& s) {
  const auto n = static_cast<Eigen::Index>(s.dimension());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  std::vector<int> sigma(static_cast<std::size_t>(s.particles));
  std::iota(sigma.begin(), sigma.end(), 0);
  double count = 0.0;
  do {
    int inversions = 0;
    for (std::size_t x = 0; x < sigma.size(); ++x) {
      for (std::size_t y = x + 1; y < sigma.size(); ++y) inversions += sigma[x] > sigma[y];
    }
    const double sign = inversions % 2 == 0 ? 1.0 : -1.0;
    for (Eigen::Index b = 0; b < n; ++b) {
      const std::vector<int> l = s.labels(static_cast<std::size_t>(b));
      std::vector<int> pl(l.size());
      for (std::size_t p = 0; p < l.size(); ++p) pl[p] = l[static_cast<std::size_t>(sigma[p])];
      a(static_cast<Eigen::Index>(s.index(pl)), b) += sign;
    }
    count += 1.0;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return a / count;
}

Eigen::MatrixXd build_hamiltonian(const ProductSpace& s, const Eigen::MatrixXd& one_body,
                                  const Eigen::MatrixXd& pair) {
  const int d = s.single();
  if (one_body.rows() != d || one_body.cols() != d) throw InvalidInput("one-body matrix size");
  if (pair.size() != 0 && (pair.rows() != d * d || pair.cols() != d * d)) {
    throw InvalidInput("pair matrix size");
  }
  const auto n = static_cast<Eigen::Index>(s.dimension());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const std::vector<int> l = s.labels(static_cast<std::size_t>(b));
    for (int p = 0; p < s.particles; ++p) {
      std::vector<int> m = l;
      for (int a = 0; a < d; ++a) {
        m[p] = a;
        h(static_cast<Eigen::Index>(s.index(m)), b) += one_body(a, l[p]);
      }
    }
    if (pair.size() == 0) continue;
    for (int p = 0; p < s.particles; ++p) {
      for (int q = p + 1; q < s.particles; ++q) {
        std::vector<int> m = l;
        const int col = l[p] * d + l[q];
        for (int row = 0; row < d * d; ++row) {
          const double v = pair(row, col);
          if (v == 0.0) continue;
          m[p] = row / d;
          m[q] = row % d;
          h(static_cast<Eigen::Index>(s.index(m)), b) += v;
        }
      }
    }
  }
  return h;
}

std::size_t DiscretePEO::antisymmetric_count() const {
  return static_cast<std::size_t>(std::count(antisymmetric.begin(), antisymmetric.end(), true));
}

DiscretePEO build_discrete_peo(const Eigen::MatrixXd& h, const ProductSpace& space) {
  const auto n = static_cast<Eigen::Index>(space.dimension());
  if (h.rows() != n || h.cols() != n) throw InvalidInput("Hamiltonian does not match the space");
  if (n > 4096) throw InvalidInput("space too large for the dense construction");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidInput("Hamiltonian is not symmetric");
  }
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::vector<std::size_t>> perms;
  for (int i = 0; i < space.particles; ++i) {
    for (int j = i + 1; j < space.particles; ++j) {
      pairs.emplace_back(i, j);
      perms.push_back(chi_permutation(space, i, j));
      const auto& p = perms.back();
      for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
          const double d = h(static_cast<Eigen::Index>(p[a]), static_cast<Eigen::Index>(p[b])) - h(a, b);
          if (std::abs(d) > 1e-10 * scale) {
            throw InvalidInput("Hamiltonian does not commute with exchange of pair (" +
                               std::to_string(i) + "," + std::to_string(j) + ")");
          }
        }
      }
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) throw RangeError("symmetric eigensolver failed");
  DiscretePEO out;
  out.space = space;
  out.energies = es.eigenvalues();
  out.states = es.eigenvectors();
  out.antisymmetric.assign(static_cast<std::size_t>(n), false);
  const double npairs = static_cast<double>(pairs.size());
  const double tol = 1e-9 * std::max(1.0, out.energies.cwiseAbs().maxCoeff());

  auto permute_rows = [&](const std::vector<std::size_t>& p, const Eigen::MatrixXd& v) {
    Eigen::MatrixXd r(v.rows(), v.cols());
    for (Eigen::Index b = 0; b < v.rows(); ++b) r.row(static_cast<Eigen::Index>(p[b])) = v.row(b);
    return r;
  };

  for (Eigen::Index start = 0; start < n;) {
    Eigen::Index stop = start + 1;
    while (stop < n && out.energies(stop) - out.energies(stop - 1) < tol) ++stop;
    const Eigen::Index g = stop - start;
    Eigen::MatrixXd v = out.states.middleCols(start, g);
    // Sum of pair exchanges restricted to the degenerate block.
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(g, g);
    for (const auto& p : perms) c += v.transpose() * permute_rows(p, v);
    c = 0.5 * (c + c.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> block(c);
    out.states.middleCols(start, g) = v * block.eigenvectors();
    for (Eigen::Index q = 0; q < g; ++q) {
      out.antisymmetric[static_cast<std::size_t>(start + q)] =
          npairs > 0 && block.eigenvalues()(q) < -npairs + 1e-6;
    }
    start = stop;
  }

  out.peo = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index q = 0; q < n; ++q) {
    if (out.antisymmetric[static_cast<std::size_t>(q)]) continue;
    out.peo += out.energies(q) * out.states.col(q) * out.states.col(q).transpose();
  }
  const Eigen::MatrixXd reduced = h - out.peo;
  for (Eigen::Index q = 0; q < n; ++q) {
    Eigen::VectorXd r = reduced * out.states.col(q);
    if (out.antisymmetric[static_cast<std::size_t>(q)]) r -= out.energies(q) * out.states.col(q);
    out.branch_residual = std::max(out.branch_residual, r.norm());
  }
  return out;
}

}  // namespace hooke::exchange
