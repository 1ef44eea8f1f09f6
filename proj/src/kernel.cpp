#include "hooke/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hooke/error.hpp"
#include "hooke/specfun.hpp"

namespace hooke::kernel {

namespace {

double interpolate(const RadialGrid& grid, const std::vector<double>& v, double r) {
  if (r < 0.0 || r > grid.r_max()) return 0.0;
  const double x = r / grid.step();
  const auto i = std::min(static_cast<std::size_t>(x), grid.size() - 2);
  const double t = x - static_cast<double>(i);
  return (1.0 - t) * v[i] + t * v[i + 1];
}

double state_weight(const KernelSpec& spec, const KernelState& s) {
  return spec.mode == Mode::constant_weight ? spec.e_c : s.energy;
}

}  // namespace

void KernelSpec::validate() const {
  if (states.empty()) throw InvalidInput("kernel spec needs at least one state");
  for (const auto& s : states) {
    if (s.m % 2 != 0) throw InvalidInput("kernel states must all be even in m");
    if (s.l < 0) throw InvalidInput("kernel state index l must be non-negative");
    if (mode != Mode::exact_deflation && s.values.size() != grid.size()) {
      throw InvalidInput("kernel state not sampled on the spec grid");
    }
  }
  if (!(k > 0.0)) throw InvalidInput("kernel spec needs k > 0");
}

KernelSpec default_spec(Mode mode, double lambda, const RadialGrid& grid, double k, double e_c) {
  KernelSpec spec;
  spec.mode = mode;
  spec.lambda = lambda;
  spec.k = k;
  spec.grid = grid;
  for (int j = -1; j <= 1; ++j) {
    for (int l = 0; l <= 2; ++l) {
      KernelState s;
      s.m = 2 * j;
      s.l = l;
      const specfun::Oscillator2DState osc = specfun::oscillator2d_state(k, s.m, l, grid);
      s.energy = osc.energy;
      s.values = osc.values;
      spec.states.push_back(std::move(s));
    }
  }
  spec.e_c = std::isnan(e_c) ? radial::oscillator_energy(Dimension::two, k, 0, 1) : e_c;
  spec.validate();
  return spec;
}

Eigen::MatrixXd DeflatedOperator::matrix() const {
  const auto n = static_cast<Eigen::Index>(base.diag.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = base.diag[i];
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    a(i, i + 1) = base.off[i];
    a(i + 1, i) = base.off[i];
  }
  for (std::size_t q = 0; q < vectors.size(); ++q) {
    a.noalias() -= (lambda * weights[q]) * vectors[q] * vectors[q].transpose();
  }
  return a;
}

DeflatedOperator assemble_channel(const KernelSpec& spec, int m) {
  spec.validate();
  DeflatedOperator op;
  op.m = m;
  op.lambda = spec.lambda;
  radial::RadialProblem p{Dimension::two, spec.k, std::abs(m), spec.interaction};
  op.base = radial::fv_operator(p, spec.grid.step(), spec.grid.r_max());
  const auto n = static_cast<Eigen::Index>(op.base.diag.size());

  std::vector<const KernelState*> chosen;
  for (const auto& s : spec.states) {
    if (s.m == m) chosen.push_back(&s);
  }
  if (chosen.empty()) return op;

  if (spec.mode == Mode::exact_deflation) {
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(op.base.diag.data(), n);
    Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(op.base.off.data(), n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success) throw RangeError("tridiagonal eigensolver failed");
    for (const KernelState* s : chosen) {
      if (s->l >= n) throw InvalidInput("deflation target beyond the channel spectrum");
      op.vectors.push_back(es.eigenvectors().col(s->l));
      op.weights.push_back(es.eigenvalues()(s->l));
    }
    return op;
  }
  for (const KernelState* s : chosen) {
    Eigen::VectorXd u(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      u(i) = std::sqrt(op.base.weight[i]) * s->values[op.base.first + static_cast<std::size_t>(i)];
    }
    op.vectors.push_back(std::move(u));
    op.weights.push_back(state_weight(spec, *s));
  }
  return op;
}

std::pair<double, std::vector<double>> solve_channel(const DeflatedOperator& op, int n) {
  const auto dim = static_cast<Eigen::Index>(op.base.diag.size());
  if (n < 1 || n > dim) throw InvalidInput("requested eigenpair index out of range");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.matrix());
  if (es.info() != Eigen::Success) throw RangeError("dense eigensolver failed");
  const Eigen::VectorXd u = es.eigenvectors().col(n - 1);
  std::vector<double> g(op.base.first + static_cast<std::size_t>(dim) + 1, 0.0);
  double lead = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    g[op.base.first + static_cast<std::size_t>(i)] = u(i) / std::sqrt(op.base.weight[i]);
    if (lead == 0.0 && std::abs(u(i)) > 1e-8) lead = u(i);
  }
  if (lead < 0.0) {
    for (double& v : g) v = -v;
  }
  return {es.eigenvalues()(n - 1), std::move(g)};
}

std::complex<double> kernel_matrix_elements(const KernelSpec& spec, double dphi, double r,
                                            double r2) {
  spec.validate();
  std::complex<double> acc = 0.0;
  for (const auto& s : spec.states) {
    if (s.values.size() != spec.grid.size()) throw InvalidInput("kernel state has no samples");
    const double radial = interpolate(spec.grid, s.values, r) * interpolate(spec.grid, s.values, r2);
    acc += state_weight(spec, s) * radial * std::polar(1.0, s.m * dphi);
  }
  return acc / (2.0 * std::numbers::pi);
}

double slater_vanishing_check(const exchange::DiscretePEO& peo, const Eigen::VectorXd& trial) {
  if (trial.size() != peo.peo.rows()) throw InvalidInput("trial state does not match the space");
  const double n = trial.norm();
  if (!(n > 0.0)) throw InvalidInput("trial state is zero");
  const Eigen::VectorXd v = trial / n;
  return std::abs(v.dot(peo.peo * v));
}

}  // namespace hooke::kernel
