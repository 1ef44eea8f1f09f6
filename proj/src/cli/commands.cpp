#include "hooke/cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <limits>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

#include "hooke/aniso.hpp"
#include "hooke/cli/manifest.hpp"
#include "hooke/error.hpp"
#include "hooke/exchange.hpp"
#include "hooke/io.hpp"
#include "hooke/kernel.hpp"
#include "hooke/parallel.hpp"
#include "hooke/peo.hpp"
#include "hooke/specfun.hpp"

namespace hooke::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Accumulates one output file, then writes it in one go.
class Csv {
 public:
  explicit Csv(std::string header) { text_ = std::move(header); }
  void comment(const std::string& s) { text_.insert(0, "# " + s + "\n"); }
  void row(std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
      if (!first) text_ += ',';
      text_ += c;
      first = false;
    }
    text_ += '\n';
  }
  void row(const std::vector<double>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += io::fmt(cells[i]);
    }
    text_ += '\n';
  }
  void raw(const std::string& line) { text_ += line + '\n'; }
  void save(const fs::path& dir, const std::string& name, std::vector<std::string>& files) const {
    io::write_text(dir / name, text_);
    files.push_back(name);
  }

 private:
  std::string text_;
};

std::string table_header(int n_max, double step) {
  return "# n_max=" + std::to_string(n_max) + " grid_step=" + io::fmt(step) + "\n";
}

// Removes the files of a previous run; refuses directories with foreign content.
void prepare_output(const fs::path& dir, bool keep_previous) {
  if (!fs::exists(dir)) {
    fs::create_directories(dir);
    return;
  }
  if (!fs::is_directory(dir)) throw ConfigError("output path '" + dir.string() + "' is not a directory");
  std::set<std::string> owned;
  if (fs::exists(dir / manifest_name)) {
    const json old = read_manifest(dir);
    owned.insert(manifest_name);
    if (old.contains("files")) {
      for (const auto& [name, sum] : old["files"].items()) owned.insert(name);
    }
  }
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!owned.count(e.path().filename().string())) {
      throw ConfigError("output directory '" + dir.string() + "' holds files not written by hooke-peo (" +
                        e.path().filename().string() + "); choose another --out");
    }
  }
  if (keep_previous) return;
  for (const auto& name : owned) fs::remove(dir / name);
}

void finish(Manifest& m, const RunConfig& c) {
  if (!c.deterministic) {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    m.run["unix_time"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
    m.run["threads"] = worker_count();
  }
  m.write(c.out);
}

RadialGrid basis_grid(const RunConfig& c, double k) {
  const double r_max = c.r_max > 0.0 ? c.r_max : radial::default_r_max(k, c.m_max, c.n_max, c.h);
  return RadialGrid(c.h, r_max, Dimension::two);
}

std::string dphi_file(const std::string& prefix, double dphi) {
  return prefix + "_dphi" + std::to_string(std::lround(dphi * 1000.0)) + "mrad.csv";
}

json basis_summary(const radial::BasisTable& t) {
  json j;
  j["k"] = t.k();
  j["h"] = t.grid().step();
  j["r_max"] = t.grid().r_max();
  j["m_max"] = t.m_max();
  j["n_max"] = t.n_max();
  j["interaction"] = t.interaction();
  return j;
}

struct BasisSource {
  radial::BasisTable table;
  json provenance;
};

BasisSource require_basis(const RunConfig& c, const std::string& what) {
  if (c.basis.empty()) {
    throw ConfigError(what + " needs --basis DIR holding a tabulated basis; create it with "
                      "`hooke-peo tabulate --out DIR`");
  }
  auto b = load_basis(c.basis);
  json p;
  p["path"] = c.basis;
  p["parameter_hash"] = b.parameter_hash;
  p["manifest_sha256"] = b.manifest_sha256;
  p["basis"] = basis_summary(b.table);
  return {std::move(b.table), p};
}

struct AnisoRun {
  double q = 0.0;
  aniso::BasisIndexMap map{0, 1};
  aniso::AnisoSpectrum spectrum;
};

AnisoRun anisotropic_spectrum(const radial::BasisTable& t, double kx, double ky) {
  if (std::abs(t.k() - ky) > 1e-12 * ky) {
    throw ConfigError("basis was tabulated with k=" + io::fmt(t.k()) + " but ky=" + io::fmt(ky) +
                      "; the basis strength must equal ky");
  }
  AnisoRun r;
  r.q = aniso::anisotropy_q(kx, ky);
  r.map = aniso::BasisIndexMap(t.m_max(), t.n_max());
  r.spectrum = aniso::diagonalize(aniso::build_matrix(t, r.map, r.q), r.map);
  return r;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Shared by peo-sum and figure fig1: one CSV per angle.
json write_parity_sums(const RunConfig& c, const radial::BasisTable& t, const AnisoRun& a,
                       const std::string& prefix, std::vector<std::string>& files) {
  const auto se = peo::spectral_peo_sum(t, a.map, a.spectrum, Parity::even, c.r_ref, c.dphi);
  const auto so = peo::spectral_peo_sum(t, a.map, a.spectrum, Parity::odd, c.r_ref, c.dphi);
  json per = json::array();
  for (std::size_t j = 0; j < c.dphi.size(); ++j) {
    Csv csv("r,S_even,S_odd,S_total\n");
    std::vector<double> total(se.abscissa.size());
    for (std::size_t i = 0; i < se.abscissa.size(); ++i) {
      total[i] = se.values[j][i] + so.values[j][i];
      csv.row({se.abscissa[i], se.values[j][i], so.values[j][i], total[i]});
    }
    csv.comment("dphi=" + io::fmt(c.dphi[j]) + " r_ref=" + io::fmt(c.r_ref) + " q=" + io::fmt(a.q));
    const std::string name = dphi_file(prefix, c.dphi[j]);
    csv.save(c.out, name, files);
    const auto& ev = se.values[j];
    const auto peak = std::max_element(ev.begin(), ev.end()) - ev.begin();
    json e;
    e["dphi"] = c.dphi[j];
    e["file"] = name;
    e["peak_r_even"] = se.abscissa[static_cast<std::size_t>(peak)];
    e["max_abs_even"] = max_abs(ev);
    e["max_abs_odd"] = max_abs(so.values[j]);
    e["max_abs_total"] = max_abs(total);
    per.push_back(e);
  }
  json r;
  r["q"] = a.q;
  r["terms_even"] = se.truncation;
  r["terms_odd"] = so.truncation;
  r["imag_max"] = std::max(se.imag_max, so.imag_max);
  r["angles"] = per;
  return r;
}

}  // namespace

void cmd_tabulate(const RunConfig& c) {
  const fs::path dir = c.out;
  const RadialGrid grid = basis_grid(c, c.k);

  // States of a compatible previous run, keyed by (m, n).
  std::map<std::pair<int, int>, json> previous;
  json old_files = json::object();
  if (c.resume && fs::exists(dir / manifest_name)) {
    const json old = read_manifest(dir);
    if (old.value("command", "") == "tabulate") {
      const json& r = old.at("results");
      const bool same = r.at("k").get<double>() == c.k && r.at("h").get<double>() == grid.step() &&
                        r.at("r_max").get<double>() == grid.r_max() &&
                        r.at("interaction").get<bool>() == c.interaction;
      if (same) {
        for (const json& s : r.at("states")) previous[{s.at("m").get<int>(), s.at("n").get<int>()}] = s;
        old_files = old.at("files");
      }
    }
  }
  prepare_output(dir, c.resume && !previous.empty());

  std::vector<char> reused(static_cast<std::size_t>((c.m_max + 1) * c.n_max), 0);
  auto reuse = [&](int m, int n) -> std::optional<radial::RadialEigenstate> {
    const auto it = previous.find({m, n});
    if (it == previous.end()) return std::nullopt;
    const std::string file = it->second.at("file").get<std::string>();
    if (!fs::exists(dir / file) || !old_files.contains(file) ||
        io::sha256_file(dir / file) != old_files[file].get<std::string>()) {
      return std::nullopt;
    }
    const auto rows = io::read_csv(dir / file);
    if (rows.size() != grid.size()) return std::nullopt;
    radial::RadialEigenstate s;
    s.problem = {Dimension::two, c.k, m, c.interaction};
    s.n = n;
    s.energy = it->second.at("energy").get<double>();
    s.r0 = it->second.at("r0").get<double>();
    s.values.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) s.values[i] = rows[i].at(1);
    reused[static_cast<std::size_t>(m * c.n_max + n - 1)] = 1;
    return s;
  };
  const auto table = radial::tabulate_basis(c.k, c.m_max, c.n_max, grid, c.interaction,
                                            c.resume ? radial::ReuseState(reuse) : radial::ReuseState{});

  Manifest man = make_manifest(c);
  json states = json::array();
  std::size_t reused_count = 0;
  for (int m = 0; m <= c.m_max; ++m) {
    for (int n = 1; n <= c.n_max; ++n) {
      const auto& s = table.state(m, n);
      const std::string name = basis_file_name(m, n);
      // Reused values round-trip exactly; rewriting refreshes the header.
      reused_count += static_cast<std::size_t>(reused[static_cast<std::size_t>(m * c.n_max + n - 1)]);
      Csv csv(table_header(c.n_max, grid.step()) + "r,g\n");
      for (std::size_t i = 0; i < grid.size(); ++i) csv.row({grid.r(i), s.values[i]});
      csv.save(dir, name, man.files);
      json e;
      e["m"] = m;
      e["n"] = n;
      e["energy"] = s.energy;
      e["norm"] = grid.inner(s.values, s.values);
      e["r0"] = s.r0;
      e["file"] = name;
      states.push_back(e);
    }
  }
  // Files of a previous, larger table that are no longer part of this one.
  const std::set<std::string> keep(man.files.begin(), man.files.end());
  for (const auto& [name, sum] : old_files.items()) {
    if (!keep.count(name) && fs::exists(dir / name)) fs::remove(dir / name);
  }
  man.results = basis_summary(table);
  man.results["states"] = states;
  man.results["max_orthogonality_residual"] = radial::max_orthogonality_residual(table);
  finish(man, c);
  std::cout << "tabulated " << table.size() << " states (" << reused_count << " reused) into " << c.out
            << "\n";
}

void cmd_peo_sum(const RunConfig& c) {
  auto src = require_basis(c, "peo-sum");
  const auto a = anisotropic_spectrum(src.table, c.kx, c.ky);
  prepare_output(c.out, false);
  Manifest man = make_manifest(c);
  man.inputs["basis"] = src.provenance;
  man.results = write_parity_sums(c, src.table, a, "S", man.files);
  finish(man, c);
  std::cout << "wrote " << man.files.size() << " spectral sums into " << c.out << "\n";
}

namespace {

void figure1(const RunConfig& c, Manifest& man) {
  auto src = require_basis(c, "figure fig1");
  const auto a = anisotropic_spectrum(src.table, c.kx, c.ky);
  man.inputs["basis"] = src.provenance;
  man.results = write_parity_sums(c, src.table, a, "fig1_S", man.files);
  const auto& t = src.table;
  Csv g(table_header(t.n_max(), t.grid().step()) + "r,g\n");
  const auto g01 = t.values(0, 1);
  for (std::size_t i = 0; i < t.grid().size(); ++i) g.row({t.grid().r(i), g01[i]});
  g.save(c.out, "fig1_g_m0_n1.csv", man.files);
  man.results["fwhm_g01"] = peo::fwhm(t.grid().points(), g01);
}

void figure2(const RunConfig& c, Manifest& man) {
  auto src = require_basis(c, "figure fig2");
  const auto& t = src.table;
  man.inputs["basis"] = src.provenance;
  const std::vector<std::pair<int, int>> picks = {{0, 1}, {t.m_max(), 1}, {t.m_max(), t.n_max()}};
  const std::size_t at1 = t.grid().nearest_index(1.0);
  json prof = json::array();
  for (const auto& [m, n] : picks) {
    const auto g = t.values(m, n);
    Csv csv(table_header(t.n_max(), t.grid().step()) + "r,g\n");
    for (std::size_t i = 0; i < t.grid().size(); ++i) csv.row({t.grid().r(i), g[i]});
    const std::string name = "fig2_" + basis_file_name(m, n);
    csv.save(c.out, name, man.files);
    json e;
    e["m"] = m;
    e["n"] = n;
    e["file"] = name;
    e["relative_value_at_r1"] = std::abs(g[at1]) / max_abs(std::vector<double>(g.begin(), g.end()));
    prof.push_back(e);
  }
  man.results["profiles"] = prof;
}

double bump(double u) { return std::abs(u) < 1.0 ? std::exp(-1.0 / (1.0 - u * u)) : 0.0; }

// Smooth probes with compact support inside the default 1D window.
const std::vector<std::pair<std::string, double (*)(double)>>& probe_functions() {
  static const std::vector<std::pair<std::string, double (*)(double)>> f = {
      {"bump", [](double x) { return bump(x / 3.0); }},
      {"bump_cos", [](double x) { return bump((x - 0.5) / 2.5) * std::cos(x); }},
      {"bump_quadratic", [](double x) { return bump((x - 1.0) / 2.0) * (1.0 + x * x); }},
  };
  return f;
}

void figure3(const RunConfig& c, Manifest& man) {
  const int top = std::max(c.N_max, *std::max_element(c.N_list.begin(), c.N_list.end()));
  const auto x = specfun::uniform_grid(-c.x_half_width, c.x_half_width, c.x_step);
  const auto table = specfun::hermite_table(top, x);
  json sums = json::array();
  for (int N : c.N_list) {
    const auto s = specfun::delta_sum_1d(table, N, c.r_ref);
    std::ostringstream os;
    specfun::write_csv(os, s, c.x_step);
    const std::string name = "fig3_N" + std::to_string(N) + ".csv";
    io::write_text(fs::path(c.out) / name, os.str());
    man.files.push_back(name);
    const auto& v = s.values[0];
    json e;
    e["N_max"] = N;
    e["file"] = name;
    e["peak_x"] = s.abscissa[static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin())];
    json errs;
    for (const auto& [label, f] : probe_functions()) {
      std::vector<double> fx(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) fx[i] = f(x[i]);
      errs[label] = std::abs(specfun::apply_delta_sum(s, fx) - f(c.r_ref));
    }
    e["sifting_error"] = errs;
    sums.push_back(e);
  }
  man.results["sums"] = sums;

  // Rescaled comparison with the angular total at dphi = 0, when a basis is given.
  if (!c.basis.empty()) {
    auto src = require_basis(c, "figure fig3 comparison");
    const auto a = anisotropic_spectrum(src.table, c.kx, c.ky);
    const std::vector<double> zero = {0.0};
    const auto se = peo::spectral_peo_sum(src.table, a.map, a.spectrum, Parity::even, c.r_ref, zero);
    const auto so = peo::spectral_peo_sum(src.table, a.map, a.spectrum, Parity::odd, c.r_ref, zero);
    const auto r = src.table.grid().points();
    const auto rt = specfun::hermite_table(c.N_max, r);
    const auto s1 = specfun::delta_sum_1d(rt, c.N_max, c.r_ref);
    Csv csv("r,S_1d,c_S_total\n");
    for (std::size_t i = 0; i < r.size(); ++i) {
      csv.row({r[i], s1.values[0][i], c.scale_c * (se.values[0][i] + so.values[0][i])});
    }
    csv.comment("N_max=" + std::to_string(c.N_max) + " c=" + io::fmt(c.scale_c));
    csv.save(c.out, "fig3_compare.csv", man.files);
    man.inputs["basis"] = src.provenance;
  }
}

}  // namespace

void cmd_figure(const RunConfig& c) {
  if (c.figure != "fig3" && (c.basis.empty() || !fs::exists(fs::path(c.basis) / manifest_name))) {
    require_basis(c, "figure " + c.figure);
  }
  prepare_output(c.out, false);
  Manifest man = make_manifest(c);
  if (c.figure == "fig1") {
    figure1(c, man);
  } else if (c.figure == "fig2") {
    figure2(c, man);
  } else {
    figure3(c, man);
  }
  finish(man, c);
  std::cout << "wrote " << c.figure << " data (" << man.files.size() << " files) into " << c.out << "\n";
}

void cmd_aniso(const RunConfig& c) {
  json provenance;
  std::optional<radial::BasisTable> table;
  if (!c.basis.empty()) {
    auto src = require_basis(c, "aniso");
    provenance = src.provenance;
    table.emplace(std::move(src.table));
  } else {
    table.emplace(radial::tabulate_basis(c.ky, c.m_max, c.n_max, basis_grid(c, c.ky), c.interaction));
    provenance["path"] = nullptr;
    provenance["basis"] = basis_summary(*table);
    provenance["parameter_hash"] = io::sha256_hex(basis_summary(*table).dump());
  }
  const auto a = anisotropic_spectrum(*table, c.kx, c.ky);
  prepare_output(c.out, false);
  Manifest man = make_manifest(c);
  man.inputs["basis"] = provenance;

  Csv e("index,energy,parity\n");
  for (Eigen::Index l = 0; l < a.spectrum.energies.size(); ++l) {
    e.row({std::to_string(l), io::fmt(a.spectrum.energies(l)), parity_name(a.spectrum.parity[static_cast<std::size_t>(l)])});
  }
  e.save(c.out, "aniso_energies.csv", man.files);

  // Row i holds coefficient a_i of every state; columns follow the energy order.
  std::string head = "m,n";
  for (Eigen::Index l = 0; l < a.spectrum.energies.size(); ++l) head += ",a" + std::to_string(l);
  Csv v(head + "\n");
  for (std::size_t i = 0; i < a.map.size(); ++i) {
    std::string line = std::to_string(a.map.m(i)) + "," + std::to_string(a.map.n(i));
    for (Eigen::Index l = 0; l < a.spectrum.vectors.cols(); ++l) {
      line += "," + io::fmt(a.spectrum.vectors(static_cast<Eigen::Index>(i), l));
    }
    v.raw(line);
  }
  v.save(c.out, "aniso_vectors.csv", man.files);

  man.results["q"] = a.q;
  man.results["kx"] = c.kx;
  man.results["ky"] = c.ky;
  man.results["states"] = a.map.size();
  man.results["even_states"] = aniso::count_parity(a.spectrum, Parity::even);
  man.results["odd_states"] = aniso::count_parity(a.spectrum, Parity::odd);
  man.results["ground_energy"] = a.spectrum.energies(0);
  man.results["max_residual"] = a.spectrum.max_residual;
  finish(man, c);
  std::cout << "q=" << io::fmt(a.q) << " ground energy " << io::fmt(a.spectrum.energies(0)) << " ("
            << a.map.size() << " states) into " << c.out << "\n";
}

void cmd_kernel(const RunConfig& c) {
  const kernel::Mode mode = c.mode == "energy"     ? kernel::Mode::energy_weighted
                            : c.mode == "constant" ? kernel::Mode::constant_weight
                                                   : kernel::Mode::exact_deflation;
  const RadialGrid grid(c.kernel_h, c.kernel_r_max, Dimension::two);
  const double e_c = c.e_c > 0.0 ? c.e_c : std::numeric_limits<double>::quiet_NaN();
  auto spec = kernel::default_spec(mode, 0.0, grid, c.k, e_c);
  prepare_output(c.out, false);
  Manifest man = make_manifest(c);
  Csv csv("lambda,m,n,energy\n");
  json rows = json::array();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  std::size_t rank = 0;
  for (double lam : c.lambda) {
    spec.lambda = lam;
    const auto op = kernel::assemble_channel(spec, c.m);
    rank = op.rank();
    const double e = kernel::solve_channel(op, c.n).first;
    csv.row({io::fmt(lam), std::to_string(c.m), std::to_string(c.n), io::fmt(e)});
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  csv.save(c.out, "kernel.csv", man.files);
  man.results["correction_rank"] = rank;
  man.results["e_c"] = spec.e_c;
  man.results["energy_spread"] = hi - lo;
  finish(man, c);
  std::cout << "m=" << c.m << " n=" << c.n << " rank " << rank << " energy spread " << io::fmt(hi - lo)
            << " into " << c.out << "\n";
}

namespace {

json series_report(double centre, int order) {
  const auto f = exchange::make_field(1, 64, 4.0, [centre](std::span<const double> a, std::span<const double> b) {
    return exchange::cd(std::exp(-2.0 * (a[0] - centre) * (a[0] - centre)) *
                            std::exp(-2.0 * (b[0] + centre) * (b[0] + centre)),
                        0.0);
  });
  const auto errs = exchange::exchange_series_errors(f, order);
  bool monotone = true;
  for (int n = 3; n <= order; ++n) monotone = monotone && errs[n] < errs[n - 1];
  json j;
  j["separation"] = centre;
  j["errors"] = errs;
  j["monotone_from_order_2"] = monotone;
  return j;
}

}  // namespace

void cmd_exchange(const RunConfig& c) {
  json report;
  report["series"] = {series_report(0.5, c.order), series_report(2.0, c.order)};

  // Swap relations for two spins and the spin operator identity.
  bool relations = true;
  double formula_dev = 0.0;
  for (unsigned bits = 0; bits < 4; ++bits) {
    const auto s = exchange::SpinConfig::basis_state(2, bits);
    const unsigned swapped = ((bits & 1u) << 1) | ((bits >> 1) & 1u);
    relations = relations && (exchange::spin_exchange(s, 0, 1).amplitudes -
                              exchange::SpinConfig::basis_state(2, swapped).amplitudes)
                                     .norm() == 0.0;
    formula_dev = std::max(formula_dev, (exchange::spin_exchange_formula(s, 0, 1).amplitudes -
                                         exchange::spin_exchange(s, 0, 1).amplitudes)
                                            .norm());
  }
  report["spin"] = {{"swap_relations_hold", relations}, {"formula_max_deviation", formula_dev}};

  exchange::ProductSpace space{c.particles, c.sites, 1};
  if (space.dimension() > 4096) {
    throw ConfigError("invalid value for sites: " + std::to_string(c.sites) + "^" + std::to_string(c.particles) +
                      " exceeds the 4096-dimensional limit");
  }
  const auto dim = static_cast<Eigen::Index>(space.dimension());
  const Eigen::MatrixXd chi = exchange::permutation_matrix(exchange::chi_permutation(space, 0, 1));
  report["chi_squared_identity"] = (chi * chi - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff() == 0.0;

  // Ring with a smooth on-site potential and a distance-decaying pair term.
  const int d = c.sites;
  Eigen::MatrixXd h1 = Eigen::MatrixXd::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    h1(a, (a + 1) % d) = h1((a + 1) % d, a) = -1.0;
    h1(a, a) = 0.3 * std::cos(2.0 * std::numbers::pi * a / d) + 0.1 * a;
  }
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) v(a * d + b, a * d + b) = 1.0 / (1.0 + std::abs(a - b));
  }
  const Eigen::MatrixXd h = exchange::build_hamiltonian(space, h1, v);
  const auto peo = exchange::build_discrete_peo(h, space);
  const Eigen::MatrixXd asym = exchange::antisymmetrizer(space);
  double slater = 0.0;
  std::vector<int> labels(static_cast<std::size_t>(c.particles));
  for (int first = 0; first + c.particles <= d; ++first) {
    for (int p = 0; p < c.particles; ++p) labels[static_cast<std::size_t>(p)] = first + p;
    Eigen::VectorXd prod = Eigen::VectorXd::Zero(dim);
    prod(static_cast<Eigen::Index>(space.index(labels))) = 1.0;
    slater = std::max(slater, kernel::slater_vanishing_check(peo, asym * prod));
  }
  report["peo"] = {{"particles", c.particles},
                   {"sites", c.sites},
                   {"dimension", space.dimension()},
                   {"antisymmetric_states", peo.antisymmetric_count()},
                   {"branch_residual", peo.branch_residual},
                   {"slater_max", slater}};

  prepare_output(c.out, false);
  Manifest man = make_manifest(c);
  io::write_text(fs::path(c.out) / "exchange_report.json", report.dump(2) + "\n");
  man.files.push_back("exchange_report.json");
  man.results = report;
  finish(man, c);
  std::cout << "exchange report (" << peo.antisymmetric_count() << " antisymmetric states, branch residual "
            << io::fmt(peo.branch_residual) << ") into " << c.out << "\n";
}

void run_command(const RunConfig& c) {
  validate(c);
  if (c.command == "tabulate") return cmd_tabulate(c);
  if (c.command == "figure") return cmd_figure(c);
  if (c.command == "peo-sum") return cmd_peo_sum(c);
  if (c.command == "aniso") return cmd_aniso(c);
  if (c.command == "kernel-solve") return cmd_kernel(c);
  if (c.command == "exchange-demo") return cmd_exchange(c);
  throw ConfigError("unknown command '" + c.command + "'");
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Pauli exclusion operator toolkit for the two-dimensional Hooke's atom"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(HOOKE_VERSION));

  KeyValues overrides;
  std::string config_file;
  auto value = [&](CLI::App* sub, const std::string& flag, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(flag, [&overrides, key](const std::string& v) { overrides[key] = v; }, help);
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_file, "key = value file; flags override its entries");
    value(sub, "--out", "out", "output directory");
    value(sub, "--deterministic", "deterministic", "false adds time and thread count to the manifest");
  };
  auto basis_opts = [&](CLI::App* sub) {
    value(sub, "--k", "k", "confinement strength");
    value(sub, "--mmax", "m_max", "largest |m|");
    value(sub, "--nmax", "n_max", "radial states per channel");
    value(sub, "--h", "h", "radial step");
    value(sub, "--rmax", "r_max", "radial extent (0 = automatic)");
    value(sub, "--interaction", "interaction", "include the 1/r repulsion (true/false)");
  };
  auto sum_opts = [&](CLI::App* sub) {
    value(sub, "--basis", "basis", "directory written by tabulate");
    value(sub, "--kx", "kx", "strength along x");
    value(sub, "--ky", "ky", "strength along y (must equal the basis k)");
    value(sub, "--dphi", "dphi", "comma separated relative angles");
    value(sub, "--rref", "r_ref", "reference radius");
  };

  auto* tab = app.add_subcommand("tabulate", "tabulate the radial basis g_{m,n}");
  common(tab);
  basis_opts(tab);
  tab->add_flag_function("--resume", [&overrides](std::int64_t) { overrides["resume"] = "true"; },
                         "reuse matching files already in --out");

  auto* fig = app.add_subcommand("figure", "figure datasets (fig1, fig2, fig3)");
  std::string which;
  fig->add_option("which", which, "fig1, fig2 or fig3")->required();
  common(fig);
  sum_opts(fig);
  value(fig, "--nmax1d", "N_max", "largest 1D order for the rescaled comparison");
  value(fig, "--nlist", "N_list", "comma separated 1D truncations");
  value(fig, "--xhalf", "x_half_width", "1D grid half width");
  value(fig, "--xstep", "x_step", "1D grid step");
  value(fig, "--scale", "scale_c", "rescaling factor of the comparison");

  auto* ps = app.add_subcommand("peo-sum", "parity-resolved completeness sums");
  common(ps);
  sum_opts(ps);

  auto* an = app.add_subcommand("aniso", "anisotropic spectrum in the isotropic basis");
  common(an);
  value(an, "--kx", "kx", "strength along x");
  value(an, "--ky", "ky", "strength along y");
  value(an, "--mmax", "m_max", "largest |m|");
  value(an, "--nmax", "n_max", "radial states per channel");
  value(an, "--h", "h", "radial step");
  value(an, "--rmax", "r_max", "radial extent (0 = automatic)");
  value(an, "--basis", "basis", "use a tabulated basis instead of solving");

  auto* ks = app.add_subcommand("kernel-solve", "kernel-corrected radial channel over a lambda sweep");
  common(ks);
  value(ks, "--mode", "mode", "energy, constant or deflation");
  value(ks, "--lambda", "lambda", "comma separated switch values");
  value(ks, "--m", "m", "angular channel");
  value(ks, "--n", "n", "eigenpair index (1 = lowest)");
  value(ks, "--Ec", "e_c", "constant-weight energy (0 = lowest surrogate energy)");
  value(ks, "--k", "k", "confinement strength");
  value(ks, "--kh", "kernel_h", "radial step");
  value(ks, "--krmax", "kernel_r_max", "radial extent");

  auto* ex = app.add_subcommand("exchange-demo", "exchange series and discrete exclusion operator report");
  common(ex);
  value(ex, "--k", "particles", "particle count (2 or 3)");
  value(ex, "--sites", "sites", "sites per particle");
  value(ex, "--order", "order", "largest series order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    RunConfig c;
    if (!config_file.empty()) {
      if (!fs::exists(config_file)) throw ConfigError("config file '" + config_file + "' not found");
      c = from_map(parse_config_text(io::read_text(config_file)), c);
    }
    c = from_map(overrides, c);
    c.command = app.get_subcommands().front()->get_name();
    if (c.command == "figure") c.figure = which;
    run_command(c);
    return exit_ok;
  } catch (const ConfigError& e) {
    std::cerr << "hooke-peo: " << e.what() << "\n";
    return exit_config;
  } catch (const InvalidInput& e) {
    std::cerr << "hooke-peo: invalid input: " << e.what() << "\n";
    return exit_config;
  } catch (const NoBracket& e) {
    std::cerr << "hooke-peo: numerical failure: " << e.what() << " (search window " << io::fmt(e.lower())
              << " to " << io::fmt(e.upper()) << ")\n";
    return exit_numerical;
  } catch (const RangeError& e) {
    std::cerr << "hooke-peo: numerical failure: " << e.what() << "\n";
    return exit_numerical;
  } catch (const std::exception& e) {
    std::cerr << "hooke-peo: " << e.what() << "\n";
    return exit_failure;
  }
}

}  // namespace hooke::cli
