#include "hooke/cli/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "hooke/io.hpp"

namespace hooke::cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(x)) {
    throw ConfigError("invalid value for " + key + ": '" + v + "' is not a finite number");
  }
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long x = std::strtol(v.c_str(), &end, 10);
  if (v.empty() || *end != '\0' || errno == ERANGE || x < -1000000000L || x > 1000000000L) {
    throw ConfigError("invalid value for " + key + ": '" + v + "' is not an integer");
  }
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("invalid value for " + key + ": '" + v + "' is not a boolean");
}

std::vector<std::string> split(const std::string& v) {
  std::vector<std::string> out;
  std::istringstream in(v);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(trim(cell));
  return out;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F f) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += f(v[i]);
  }
  return s;
}

struct Field {
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
};

Field real(double RunConfig::*p) {
  return {[p](const RunConfig& c) { return io::fmt(c.*p); },
          [p](RunConfig& c, const std::string& k, const std::string& v) { c.*p = to_double(k, v); }};
}

Field integer(int RunConfig::*p) {
  return {[p](const RunConfig& c) { return std::to_string(c.*p); },
          [p](RunConfig& c, const std::string& k, const std::string& v) { c.*p = to_int(k, v); }};
}

Field flag(bool RunConfig::*p) {
  return {[p](const RunConfig& c) { return std::string(c.*p ? "true" : "false"); },
          [p](RunConfig& c, const std::string& k, const std::string& v) { c.*p = to_bool(k, v); }};
}

Field text(std::string RunConfig::*p) {
  return {[p](const RunConfig& c) { return c.*p; },
          [p](RunConfig& c, const std::string&, const std::string& v) { c.*p = v; }};
}

Field reals(std::vector<double> RunConfig::*p) {
  return {[p](const RunConfig& c) { return join(c.*p, [](double x) { return io::fmt(x); }); },
          [p](RunConfig& c, const std::string& k, const std::string& v) {
            std::vector<double> out;
            for (const auto& s : split(v)) out.push_back(to_double(k, s));
            c.*p = std::move(out);
          }};
}

Field integers(std::vector<int> RunConfig::*p) {
  return {[p](const RunConfig& c) { return join(c.*p, [](int x) { return std::to_string(x); }); },
          [p](RunConfig& c, const std::string& k, const std::string& v) {
            std::vector<int> out;
            for (const auto& s : split(v)) out.push_back(to_int(k, s));
            c.*p = std::move(out);
          }};
}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> f = {
      {"command", text(&RunConfig::command)},
      {"figure", text(&RunConfig::figure)},
      {"k", real(&RunConfig::k)},
      {"kx", real(&RunConfig::kx)},
      {"ky", real(&RunConfig::ky)},
      {"m_max", integer(&RunConfig::m_max)},
      {"n_max", integer(&RunConfig::n_max)},
      {"h", real(&RunConfig::h)},
      {"r_max", real(&RunConfig::r_max)},
      {"interaction", flag(&RunConfig::interaction)},
      {"N_max", integer(&RunConfig::N_max)},
      {"N_list", integers(&RunConfig::N_list)},
      {"x_half_width", real(&RunConfig::x_half_width)},
      {"x_step", real(&RunConfig::x_step)},
      {"scale_c", real(&RunConfig::scale_c)},
      {"r_ref", real(&RunConfig::r_ref)},
      {"dphi", reals(&RunConfig::dphi)},
      {"mode", text(&RunConfig::mode)},
      {"lambda", reals(&RunConfig::lambda)},
      {"e_c", real(&RunConfig::e_c)},
      {"m", integer(&RunConfig::m)},
      {"n", integer(&RunConfig::n)},
      {"kernel_h", real(&RunConfig::kernel_h)},
      {"kernel_r_max", real(&RunConfig::kernel_r_max)},
      {"particles", integer(&RunConfig::particles)},
      {"sites", integer(&RunConfig::sites)},
      {"order", integer(&RunConfig::order)},
      {"basis", text(&RunConfig::basis)},
      {"out", text(&RunConfig::out)},
      {"resume", flag(&RunConfig::resume)},
      {"deterministic", flag(&RunConfig::deterministic)},
  };
  return f;
}

void require(bool ok, const std::string& field, const std::string& what) {
  if (!ok) throw ConfigError("invalid value for " + field + ": " + what);
}

bool multiple_of(double x, double step) {
  const double q = x / step;
  return std::abs(q - std::round(q)) < 1e-9 * std::max(1.0, q);
}

}  // namespace

KeyValues to_map(const RunConfig& c) {
  KeyValues kv;
  for (const auto& [key, f] : fields()) kv[key] = f.get(c);
  return kv;
}

RunConfig from_map(const KeyValues& kv, RunConfig base) {
  for (const auto& [key, value] : kv) {
    const auto it = fields().find(key);
    if (it == fields().end()) throw ConfigError("unknown configuration key '" + key + "'");
    it->second.set(base, key, value);
  }
  return base;
}

KeyValues parse_config_text(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

std::string to_config_text(const KeyValues& kv) {
  std::string s;
  for (const auto& [key, value] : kv) s += key + " = " + value + "\n";
  return s;
}

void validate(const RunConfig& c) {
  require(c.k > 0.0, "k", "must be positive (got " + io::fmt(c.k) + ")");
  require(c.kx > 0.0, "kx", "must be positive (got " + io::fmt(c.kx) + ")");
  require(c.ky > 0.0, "ky", "must be positive (got " + io::fmt(c.ky) + ")");
  require(c.m_max >= 0, "m_max", "must be non-negative");
  require(c.n_max >= 1, "n_max", "must be at least 1");
  require(c.h >= 1e-4 && c.h <= 5e-2, "h", "must lie in [1e-4, 5e-2]");
  require(c.r_max == 0.0 || (c.r_max >= 8.0 * c.h && multiple_of(c.r_max, c.h)), "r_max",
          "must be 0 (automatic) or a multiple of h spanning at least 8 steps");
  require(c.N_max >= 0, "N_max", "must be non-negative");
  require(!c.N_list.empty(), "N_list", "must not be empty");
  for (int v : c.N_list) require(v >= 0, "N_list", "entries must be non-negative");
  require(c.x_half_width > 0.0, "x_half_width", "must be positive");
  require(c.x_step > 0.0 && c.x_step < c.x_half_width, "x_step", "must be positive and below x_half_width");
  require(c.scale_c > 0.0, "scale_c", "must be positive");
  require(c.r_ref > 0.0, "r_ref", "must be positive");
  require(!c.dphi.empty(), "dphi", "must not be empty");
  require(c.mode == "energy" || c.mode == "constant" || c.mode == "deflation", "mode",
          "must be energy, constant or deflation");
  require(!c.lambda.empty(), "lambda", "must not be empty");
  require(c.e_c >= 0.0, "e_c", "must be non-negative (0 selects the default)");
  require(c.n >= 1, "n", "must be at least 1");
  require(c.kernel_h >= 1e-4 && c.kernel_h <= 5e-2, "kernel_h", "must lie in [1e-4, 5e-2]");
  require(c.kernel_r_max >= 8.0 * c.kernel_h && multiple_of(c.kernel_r_max, c.kernel_h), "kernel_r_max",
          "must be a multiple of kernel_h spanning at least 8 steps");
  require(c.particles >= 2 && c.particles <= 3, "particles", "must be 2 or 3");
  require(c.sites >= 2 && c.sites <= 16, "sites", "must lie in [2, 16]");
  require(c.order >= 0 && c.order <= 40, "order", "must lie in [0, 40]");
  require(!c.out.empty(), "out", "must not be empty");
  if (c.command == "figure") {
    require(c.figure == "fig1" || c.figure == "fig2" || c.figure == "fig3", "figure",
            "must be fig1, fig2 or fig3");
  }
}

std::string parameter_hash(const RunConfig& c) {
  auto kv = to_map(c);
  kv.erase("out");
  kv.erase("resume");
  return io::sha256_hex(to_config_text(kv));
}

}  // namespace hooke::cli
