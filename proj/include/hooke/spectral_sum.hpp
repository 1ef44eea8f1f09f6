#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace hooke {

enum class Parity { even, odd };

inline const char* parity_name(Parity p) { return p == Parity::even ? "even" : "odd"; }

/// Sampled completeness sum at a fixed reference point.
///
/// 1D sums carry a single row in `values`; angular sums carry one row per
/// entry of `angles`.
struct SpectralSum {
  std::string label;
  double reference = 0.0;
  std::size_t reference_index = 0;
  int truncation = 0;  // number of terms summed
  std::vector<double> abscissa;
  std::vector<double> angles;
  std::vector<std::vector<double>> values;
  double imag_max = 0.0;  // largest discarded imaginary part
};

}  // namespace hooke
