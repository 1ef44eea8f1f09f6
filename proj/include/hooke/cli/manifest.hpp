#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "hooke/cli/config.hpp"
#include "hooke/radial.hpp"

namespace hooke::cli {

inline constexpr const char* manifest_name = "manifest.json";

/// One per output directory. Keys are emitted sorted, so identical runs give
/// identical bytes.
struct Manifest {
  std::string command;
  std::string version;
  std::string parameter_hash;
  KeyValues parameters;            // without the output location
  std::vector<std::string> files;  // relative to the output directory
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  nlohmann::json run = nlohmann::json::object();  // only filled for non-deterministic runs

  /// Hashes every listed file and writes manifest.json into dir.
  void write(const std::filesystem::path& dir) const;
};

Manifest make_manifest(const RunConfig& c);

nlohmann::json read_manifest(const std::filesystem::path& dir);

struct LoadedBasis {
  radial::BasisTable table;
  std::string parameter_hash;
  std::string manifest_sha256;
};

/// Reads a tabulated basis; checks every file checksum against the manifest.
LoadedBasis load_basis(const std::filesystem::path& dir);

std::string basis_file_name(int m, int n);

}  // namespace hooke::cli
