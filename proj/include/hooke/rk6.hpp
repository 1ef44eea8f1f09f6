#pragma once

#include <array>

namespace hooke::rk6 {

// Butcher's seven-stage sixth-order explicit scheme.
inline constexpr std::array<double, 7> c = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0, 0.5, 0.5, 1.0};
inline constexpr std::array<std::array<double, 6>, 7> a = {{
    {0, 0, 0, 0, 0, 0},
    {1.0 / 3.0, 0, 0, 0, 0, 0},
    {0, 2.0 / 3.0, 0, 0, 0, 0},
    {1.0 / 12.0, 1.0 / 3.0, -1.0 / 12.0, 0, 0, 0},
    {-1.0 / 16.0, 9.0 / 8.0, -3.0 / 16.0, -3.0 / 8.0, 0, 0},
    {0, 9.0 / 8.0, -3.0 / 8.0, -3.0 / 4.0, 0.5, 0},
    {9.0 / 44.0, -9.0 / 11.0, 63.0 / 44.0, 18.0 / 11.0, 0, -16.0 / 11.0},
}};
inline constexpr std::array<double, 7> b = {11.0 / 120.0, 0.0, 27.0 / 40.0, 27.0 / 40.0,
                                            -4.0 / 15.0, -4.0 / 15.0, 11.0 / 120.0};

/// One step of y' = f(t, y) for a fixed-size state. h may be negative.
template <std::size_t N, class F>
std::array<double, N> step(F&& f, double t, const std::array<double, N>& y, double h) {
  std::array<std::array<double, N>, 7> k{};
  for (std::size_t s = 0; s < 7; ++s) {
    std::array<double, N> ys = y;
    for (std::size_t j = 0; j < s; ++j) {
      if (a[s][j] == 0.0) continue;
      for (std::size_t q = 0; q < N; ++q) ys[q] += h * a[s][j] * k[j][q];
    }
    k[s] = f(t + c[s] * h, ys);
  }
  std::array<double, N> out = y;
  for (std::size_t s = 0; s < 7; ++s) {
    if (b[s] == 0.0) continue;
    for (std::size_t q = 0; q < N; ++q) out[q] += h * b[s] * k[s][q];
  }
  return out;
}

}  // namespace hooke::rk6
