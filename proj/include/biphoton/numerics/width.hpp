#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>

#include "biphoton/numerics/grid.hpp"

namespace biphoton {

inline constexpr std::size_t kMinSamplesAboveHalf = 8;

struct WidthResult {
  double fwhm = 0.0;
  double left = 0.0;   // interpolated half-maximum crossings
  double right = 0.0;
  std::size_t peak_index = 0;
  double peak = 0.0;
  std::size_t samples_above_half = 0;
  // Some sample outside the main lobe also reaches half maximum.
  bool multimodal = false;
  // Largest value beyond the first minima that bound the main lobe, over the peak.
  double sidelobe_ratio = 0.0;
};

// Full width at half maximum of the main lobe: the innermost half-maximum
// crossings on either side of the global maximum, linearly interpolated.
inline WidthResult fwhm(std::span<const double> y, const UniformGrid& grid) {
  const std::size_t n = y.size();
  if (n != grid.count()) throw Error(ErrorKind::grid_mismatch, "fwhm: samples and grid differ in length");
  const auto peak_it = std::max_element(y.begin(), y.end());
  const std::size_t ip = static_cast<std::size_t>(peak_it - y.begin());
  const double peak = *peak_it;
  if (!(peak > 0.0)) throw Error(ErrorKind::under_resolved, "fwhm: curve has no positive maximum");
  const double half = 0.5 * peak;

  std::size_t l = ip;
  while (l > 0 && y[l] >= half) --l;
  std::size_t r = ip;
  while (r + 1 < n && y[r] >= half) ++r;
  if (y[l] >= half || y[r] >= half)
    throw Error(ErrorKind::range, "fwhm: main lobe extends to the grid edge");

  WidthResult out;
  out.peak_index = ip;
  out.peak = peak;
  out.samples_above_half = r - l - 1;
  if (out.samples_above_half < kMinSamplesAboveHalf)
    throw Error(ErrorKind::under_resolved,
                "fwhm: only " + std::to_string(out.samples_above_half) +
                    " samples above half maximum (need " + std::to_string(kMinSamplesAboveHalf) + ")");

  const double h = grid.step();
  out.left = grid[l] + h * (half - y[l]) / (y[l + 1] - y[l]);
  out.right = grid[r - 1] + h * (y[r - 1] - half) / (y[r - 1] - y[r]);
  out.fwhm = out.right - out.left;

  for (std::size_t i = 0; i < n && !out.multimodal; ++i)
    if ((i < l || i > r) && y[i] >= half) out.multimodal = true;

  std::size_t lm = l;
  while (lm > 0 && y[lm - 1] <= y[lm]) --lm;
  std::size_t rm = r;
  while (rm + 1 < n && y[rm + 1] <= y[rm]) ++rm;
  double side = 0.0;
  for (std::size_t i = 0; i < lm; ++i) side = std::max(side, y[i]);
  for (std::size_t i = rm + 1; i < n; ++i) side = std::max(side, y[i]);
  out.sidelobe_ratio = side / peak;
  return out;
}

}  // namespace biphoton
