#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "biphoton/numerics/parallel.hpp"
#include "biphoton/propagation/fibre.hpp"
#include "biphoton/propagation/temporal.hpp"

namespace biphoton {

// Fibre length (cm) whose quadratic phase cancels the crystal chirp:
// kappa_f l + D^2 / (4 alpha) = 0.
inline double optimal_length(const CrystalModel& model, const FibreSpec& fibre) {
  const double a = model.spec.alpha_per_cm2;
  const double d = model.summary.group_mismatch;
  if (!(fibre.kappa > 0.0))
    throw Error(ErrorKind::invalid_spec, "compression length needs a fibre with positive GVD");
  if (!(a < 0.0))
    throw Error(ErrorKind::no_compression_solution,
                "a normally dispersive fibre only broadens the wavepacket unless alpha < 0");
  return -d * d / (4.0 * a * fibre.kappa);
}

struct SweepPoint {
  double length_cm = 0.0;
  double fwhm_s = 0.0;
  double sidelobe_ratio = 0.0;
  bool multimodal = false;
};

inline SweepPoint measure_at(const SpectralAmplitude& spectrum, const FibreSpec& fibre, double length_cm,
                             const TimeOptions& opt = {}) {
  const TemporalAmplitude t = to_time(apply_fibre(spectrum, fibre, length_cm), opt);
  return {length_cm, t.fwhm(), t.sidelobe_ratio(), t.width.multimodal};
}

// G2 width after each fibre length. Entries are independent; the output order
// follows `lengths`.
inline std::vector<SweepPoint> sweep_fibre(const SpectralAmplitude& spectrum, const FibreSpec& fibre,
                                           const std::vector<double>& lengths, const TimeOptions& opt = {}) {
  for (double l : lengths)
    if (!(l >= 0.0)) throw Error(ErrorKind::invalid_spec, "sweep lengths must be non-negative");
  std::vector<SweepPoint> out(lengths.size());
  parallel_for(lengths.size(), [&](std::size_t i) { out[i] = measure_at(spectrum, fibre, lengths[i], opt); });
  return out;
}

inline std::vector<double> linspace(double start, double stop, std::size_t count) {
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = start;
    return v;
  }
  for (std::size_t i = 0; i < count; ++i)
    v[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  return v;
}

// Golden-section refinement of the sweep minimum within its neighbouring
// samples, to a bracket of tol_cm.
inline SweepPoint refine_minimum(const SpectralAmplitude& spectrum, const FibreSpec& fibre,
                                 const std::vector<SweepPoint>& sweep, double tol_cm = 0.01,
                                 const TimeOptions& opt = {}) {
  if (sweep.empty()) throw Error(ErrorKind::invalid_spec, "refine_minimum needs a non-empty sweep");
  const auto best = std::min_element(sweep.begin(), sweep.end(),
                                     [](const SweepPoint& a, const SweepPoint& b) { return a.fwhm_s < b.fwhm_s; });
  const std::size_t i = static_cast<std::size_t>(best - sweep.begin());
  double lo = sweep[i > 0 ? i - 1 : i].length_cm;
  double hi = sweep[i + 1 < sweep.size() ? i + 1 : i].length_cm;
  if (hi - lo <= tol_cm) return *best;

  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  SweepPoint p1 = measure_at(spectrum, fibre, x1, opt);
  SweepPoint p2 = measure_at(spectrum, fibre, x2, opt);
  while (hi - lo > tol_cm) {
    if (p1.fwhm_s <= p2.fwhm_s) {
      hi = x2;
      x2 = x1;
      p2 = p1;
      x1 = hi - inv_phi * (hi - lo);
      p1 = measure_at(spectrum, fibre, x1, opt);
    } else {
      lo = x1;
      x1 = x2;
      p1 = p2;
      x2 = lo + inv_phi * (hi - lo);
      p2 = measure_at(spectrum, fibre, x2, opt);
    }
  }
  SweepPoint refined = p1.fwhm_s <= p2.fwhm_s ? p1 : p2;
  return refined.fwhm_s < best->fwhm_s ? refined : *best;
}

}  // namespace biphoton
