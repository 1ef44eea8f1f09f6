#include "hooke/cli/manifest.hpp"

#include <cmath>

#include "hooke/io.hpp"

namespace hooke::cli {

namespace fs = std::filesystem;
using nlohmann::json;

void Manifest::write(const fs::path& dir) const {
  json j;
  j["command"] = command;
  j["version"] = version;
  j["parameter_hash"] = parameter_hash;
  j["parameters"] = parameters;
  json f = json::object();
  for (const auto& name : files) f[name] = io::sha256_file(dir / name);
  j["files"] = f;
  j["inputs"] = inputs;
  j["results"] = results;
  if (!run.empty()) j["run"] = run;
  io::write_text(dir / manifest_name, j.dump(2) + "\n");
}

Manifest make_manifest(const RunConfig& c) {
  Manifest m;
  m.command = c.command;
  m.version = HOOKE_VERSION;
  m.parameter_hash = parameter_hash(c);
  m.parameters = to_map(c);
  m.parameters.erase("out");
  m.parameters.erase("resume");
  return m;
}

json read_manifest(const fs::path& dir) {
  const fs::path p = dir / manifest_name;
  if (!fs::exists(p)) throw ConfigError("no " + std::string(manifest_name) + " in " + dir.string());
  try {
    return json::parse(io::read_text(p));
  } catch (const json::exception& e) {
    throw ConfigError("unreadable manifest " + p.string() + ": " + e.what());
  }
}

std::string basis_file_name(int m, int n) {
  return "g_m" + std::to_string(m) + "_n" + std::to_string(n) + ".csv";
}

LoadedBasis load_basis(const fs::path& dir) {
  if (!fs::exists(dir / manifest_name)) {
    throw ConfigError("no basis table in '" + dir.string() +
                      "'; create one with `hooke-peo tabulate --out " + dir.string() + "`");
  }
  const json j = read_manifest(dir);
  if (j.value("command", "") != "tabulate") {
    throw ConfigError("'" + dir.string() + "' does not hold a basis table (run `hooke-peo tabulate`)");
  }
  try {
    const json& r = j.at("results");
    const double k = r.at("k").get<double>();
    const double h = r.at("h").get<double>();
    const double r_max = r.at("r_max").get<double>();
    const int m_max = r.at("m_max").get<int>();
    const int n_max = r.at("n_max").get<int>();
    const bool interaction = r.at("interaction").get<bool>();
    RadialGrid grid(h, r_max, Dimension::two);

    std::vector<radial::RadialEigenstate> states(static_cast<std::size_t>((m_max + 1) * n_max));
    std::vector<bool> seen(states.size(), false);
    for (const json& s : r.at("states")) {
      const int m = s.at("m").get<int>();
      const int n = s.at("n").get<int>();
      if (m < 0 || m > m_max || n < 1 || n > n_max) throw ConfigError("manifest lists a state outside the basis");
      const std::string file = s.at("file").get<std::string>();
      const std::string want = j.at("files").at(file).get<std::string>();
      if (io::sha256_file(dir / file) != want) {
        throw ConfigError("checksum mismatch for " + (dir / file).string() + "; re-run `hooke-peo tabulate`");
      }
      const auto rows = io::read_csv(dir / file);
      if (rows.size() != grid.size()) throw ConfigError(file + " does not match the basis grid");
      radial::RadialEigenstate st;
      st.problem = {Dimension::two, k, m, interaction};
      st.n = n;
      st.energy = s.at("energy").get<double>();
      st.r0 = s.at("r0").get<double>();
      st.values.resize(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != 2 || std::abs(rows[i][0] - grid.r(i)) > 1e-9) {
          throw ConfigError(file + " row " + std::to_string(i) + " does not match the basis grid");
        }
        st.values[i] = rows[i][1];
      }
      const auto idx = static_cast<std::size_t>(m * n_max + n - 1);
      states[idx] = std::move(st);
      seen[idx] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i) {
      if (!seen[i]) throw ConfigError("basis table in '" + dir.string() + "' is incomplete; resume with `hooke-peo tabulate --resume`");
    }
    return {radial::BasisTable(grid, k, interaction, m_max, n_max, std::move(states)),
            j.at("parameter_hash").get<std::string>(), io::sha256_file(dir / manifest_name)};
  } catch (const json::exception& e) {
    throw ConfigError("malformed basis manifest in '" + dir.string() + "': " + e.what());
  }
}

}  // namespace hooke::cli
