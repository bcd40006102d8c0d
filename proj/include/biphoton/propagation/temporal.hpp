#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "biphoton/crystal/tpsa.hpp"
#include "biphoton/numerics/fft.hpp"
#include "biphoton/numerics/width.hpp"

namespace biphoton {

// F(tau) on a delay grid in seconds; |F(tau)|^2 is the second-order
// correlation function G2(tau).
struct TemporalAmplitude {
  ComplexCurve curve;
  WidthResult width;            // main lobe of G2
  std::size_t pad_factor = 1;   // spectral zero-padding used to refine the tau step
  std::vector<std::string> warnings;

  const UniformGrid& grid() const noexcept { return curve.grid(); }
  std::vector<double> g2() const { return curve.modulus_squared(); }
  double fwhm() const noexcept { return width.fwhm; }
  double sidelobe_ratio() const noexcept { return width.sidelobe_ratio; }

  // Intensity-weighted mean delay.
  double centroid() const {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      const double w = std::norm(curve[i]);
      num += w * grid()[i];
      den += w;
    }
    return num / den;
  }
};

struct TimeOptions {
  // The spectrum is zero-padded (finer tau step) until the G2 main lobe holds
  // at least this many samples.
  std::size_t min_fwhm_samples = 32;
  std::size_t max_points = std::size_t{1} << 22;
  // Largest G2 allowed in the outer 1% of the delay window, relative to the peak.
  double max_edge_fraction = 1e-3;
};

namespace detail {

inline double edge_fraction(const std::vector<double>& g2, double peak) {
  const std::size_t band = std::max<std::size_t>(1, g2.size() / 100);
  double edge = 0.0;
  for (std::size_t i = 0; i < band; ++i) edge = std::max({edge, g2[i], g2[g2.size() - 1 - i]});
  return edge / peak;
}

}  // namespace detail

// F(tau) = int dOmega exp(+i Omega tau) F(Omega), unitary normalization.
inline TemporalAmplitude to_time(const SpectralAmplitude& spectrum, const TimeOptions& opt = {}) {
  const std::size_t n = spectrum.grid().count();
  std::size_t pad = 1;
  for (;;) {
    FourierResult ft = fourier_transform(zero_pad(spectrum.curve, pad), +1);
    const auto g2 = ft.curve.modulus_squared();
    const bool can_refine = n * pad * 2 <= opt.max_points;
    WidthResult width;
    try {
      width = fwhm(g2, ft.curve.grid());
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::under_resolved && can_refine) {
        pad *= 2;
        continue;
      }
      throw;
    }
    if (width.samples_above_half < opt.min_fwhm_samples && can_refine) {
      pad *= 2;
      continue;
    }
    TemporalAmplitude out{std::move(ft.curve), width, pad, spectrum.warnings};
    for (auto& w : ft.warnings) out.warnings.push_back(std::move(w));
    if (width.samples_above_half < opt.min_fwhm_samples)
      out.warnings.push_back("G2 main lobe has only " + std::to_string(width.samples_above_half) +
                             " samples above half maximum");
    if (width.multimodal) out.warnings.push_back("G2 has several disjoint regions above half maximum");
    if (const double edge = detail::edge_fraction(g2, width.peak); edge > opt.max_edge_fraction)
      out.warnings.push_back("G2 does not decay at the edges of the delay window (" + std::to_string(edge) +
                             " of peak); the spectral step is too coarse and the delay axis wraps");
    return out;
  }
}

}  // namespace biphoton
