#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hooke::io {

/// 17 significant digits, enough to round-trip any double.
std::string fmt(double v);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

/// Rows of numeric CSV, skipping '#' comments and a non-numeric header line.
std::vector<std::vector<double>> read_csv(const std::filesystem::path& path);

}  // namespace hooke::io
