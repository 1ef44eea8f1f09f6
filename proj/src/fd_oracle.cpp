#include "hooke/fd_oracle.hpp"

#include <lapacke.h>

#include <cmath>
#include <string>

#include "hooke/error.hpp"

namespace hooke::radial {

FvOperator fv_operator(const RadialProblem& p, double step, double r_max) {
  if (!(step > 0.0) || !(r_max > step)) throw InvalidInput("finite-volume grid is degenerate");
  const auto n_cells = static_cast<std::size_t>(std::llround(r_max / step));
  const double pw = p.dimension == Dimension::two ? 1.0 : 2.0;
  const double h = step;
  const double c = p.coulomb();
  const double quarter_k = 0.25 * p.k;
  FvOperator op;
  op.step = h;
  op.first = p.angular == 0 ? 0 : 1;
  std::vector<double> a_diag, a_off;
  for (std::size_t i = op.first; i < n_cells; ++i) {
    const double r = i * h;
    const double flux_out = std::pow(r + 0.5 * h, pw) / h;
    const double flux_in = i == 0 ? 0.0 : std::pow(r - 0.5 * h, pw) / h;
    double w, vw;
    if (i == 0) {
      const double e = 0.5 * h;
      if (pw == 1.0) {
        w = e * e / 2.0;
        vw = c * e + quarter_k * std::pow(e, 4) / 4.0;
      } else {
        w = e * e * e / 3.0;
        vw = c * e * e / 2.0 + quarter_k * std::pow(e, 5) / 5.0;
      }
    } else {
      w = std::pow(r, pw) * h;
      vw = p.potential(r) * w;
    }
    op.weight.push_back(w);
    a_diag.push_back(flux_out + flux_in + vw);
    if (i + 1 < n_cells) a_off.push_back(-flux_out);
  }
  op.diag.resize(a_diag.size());
  op.off.resize(a_off.size());
  for (std::size_t j = 0; j < a_diag.size(); ++j) op.diag[j] = a_diag[j] / op.weight[j];
  for (std::size_t j = 0; j < a_off.size(); ++j) {
    op.off[j] = a_off[j] / std::sqrt(op.weight[j] * op.weight[j + 1]);
  }
  return op;
}

FdSpectrum fd_spectrum(const RadialProblem& problem, double step, double r_max, int count,
                       bool vectors) {
  FvOperator op = fv_operator(problem, step, r_max);
  const auto n = static_cast<lapack_int>(op.diag.size());
  if (count < 1 || count > n) throw InvalidInput("requested eigenpair count out of range");
  std::vector<double> d = op.diag;
  std::vector<double> e(op.off);
  e.resize(static_cast<std::size_t>(n));
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<double> z(vectors ? static_cast<std::size_t>(n) * count : 1);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'I', n, d.data(),
                                         e.data(), 0.0, 0.0, 1, count, 0.0, &found, w.data(),
                                         z.data(), vectors ? n : 1, support.data());
  if (info != 0 || found != count) {
    throw RangeError("tridiagonal eigensolver failed (info=" + std::to_string(info) + ")");
  }
  FdSpectrum out;
  out.energies.assign(w.begin(), w.begin() + count);
  if (vectors) {
    const std::size_t n_nodes = op.first + op.diag.size() + 1;
    for (int j = 0; j < count; ++j) {
      std::vector<double> g(n_nodes, 0.0);
      const double* col = z.data() + static_cast<std::size_t>(j) * n;
      for (lapack_int i = 0; i < n; ++i) g[op.first + i] = col[i] / std::sqrt(op.weight[i]);
      out.profiles.push_back(std::move(g));
    }
  }
  return out;
}

FdSpectrum fd_spectrum_extrapolated(const RadialProblem& problem, double step, double r_max,
                                    int count, bool vectors) {
  FdSpectrum coarse = fd_spectrum(problem, step, r_max, count, vectors);
  FdSpectrum fine = fd_spectrum(problem, 0.5 * step, r_max, count, vectors);
  FdSpectrum out;
  for (int j = 0; j < count; ++j) {
    out.energies.push_back((4.0 * fine.energies[j] - coarse.energies[j]) / 3.0);
  }
  if (vectors) {
    for (int j = 0; j < count; ++j) {
      const auto& gc = coarse.profiles[j];
      const auto& gf = fine.profiles[j];
      double dot = 0.0;
      for (std::size_t i = 0; i < gc.size(); ++i) dot += gc[i] * gf[2 * i];
      const double s = dot < 0.0 ? -1.0 : 1.0;
      std::vector<double> g(gc.size());
      for (std::size_t i = 0; i < gc.size(); ++i) g[i] = (4.0 * s * gf[2 * i] - gc[i]) / 3.0;
      out.profiles.push_back(std::move(g));
    }
  }
  return out;
}

}  // namespace hooke::radial
