#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hooke::cli {

// Bad flag, bad value or missing input; exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

/// Every parameter of every subcommand. Keys of the file form are the field
/// names below; lists are comma separated.
struct RunConfig {
  std::string command;
  std::string figure;  // fig1, fig2 or fig3 for the figure command
  double k = 4.0;
  double kx = 9.61;
  double ky = 4.0;
  int m_max = 8;
  int n_max = 60;
  double h = 0.005;
  double r_max = 0.0;  // 0 selects the automatic extent
  bool interaction = true;
  int N_max = 500;
  std::vector<int> N_list = {50, 125, 250, 500};
  double x_half_width = 5.0;
  double x_step = 0.005;
  double scale_c = 0.1;
  double r_ref = 1.0;
  std::vector<double> dphi = {0.0, 0.78539816339744828, 1.5707963267948966, 3.1415926535897931};
  std::string mode = "energy";
  std::vector<double> lambda = {0.0, 0.5, 1.0};
  double e_c = 0.0;  // 0 selects the lowest surrogate energy
  int m = 0;
  int n = 1;
  double kernel_h = 0.02;
  double kernel_r_max = 10.0;
  int particles = 2;
  int sites = 8;
  int order = 12;
  std::string basis;
  std::string out = "out";
  bool resume = false;
  bool deterministic = true;

  bool operator==(const RunConfig&) const = default;
};

KeyValues to_map(const RunConfig& c);

/// Applies the entries of kv on top of base; unknown keys are rejected.
RunConfig from_map(const KeyValues& kv, RunConfig base = {});

/// `key = value` lines; '#' starts a comment.
KeyValues parse_config_text(const std::string& text);
std::string to_config_text(const KeyValues& kv);

/// Throws ConfigError naming the offending field.
void validate(const RunConfig& c);

/// SHA-256 of the canonical file form without output location and resume flag.
std::string parameter_hash(const RunConfig& c);

}  // namespace hooke::cli
