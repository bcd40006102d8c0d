#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "biphoton/dispersion/summary.hpp"
#include "biphoton/numerics/erf.hpp"
#include "biphoton/numerics/grid.hpp"
#include "biphoton/numerics/parallel.hpp"
#include "biphoton/numerics/quadrature.hpp"

namespace biphoton {

// How the wavevector mismatch depends on the detuning Omega.
//   exact      full Sellmeier k_i(w0 - Omega) + k_s(w0 + Omega) - k_p
//   quadratic  mismatch0 + D Omega + kappa Omega^2
//   linear     mismatch0 + D Omega
enum class MismatchMode { exact, quadratic, linear };

enum class ClosedForm { erf, rect };

inline std::string_view to_string(MismatchMode m) {
  switch (m) {
    case MismatchMode::exact: return "exact";
    case MismatchMode::quadratic: return "quadratic";
    case MismatchMode::linear: return "linear";
  }
  return "?";
}

inline std::string_view to_string(ClosedForm k) { return k == ClosedForm::erf ? "erf" : "rect"; }

// Two-photon spectral amplitude F(Omega) on a detuning grid (rad/s). The
// idler sits at omega0 - Omega and the signal at omega0 + Omega.
struct SpectralAmplitude {
  ComplexCurve curve;
  double omega0 = 0.0;
  std::string source;        // e.g. "numeric/linear", "closed/erf"
  double normalization = 1.0;  // raw values were divided by this
  std::vector<std::string> warnings;

  const UniformGrid& grid() const noexcept { return curve.grid(); }
};

inline double phase_mismatch(const CrystalModel& model, double omega, MismatchMode mode) {
  const auto& s = model.summary;
  switch (mode) {
    case MismatchMode::exact:
      return wavevector(model.materials.idler, s.omega0 - omega, 0) +
             wavevector(model.materials.signal, s.omega0 + omega, 0) - s.k_pump;
    case MismatchMode::quadratic:
      return s.mismatch0 + s.group_mismatch * omega + s.gvd_mean * omega * omega;
    case MismatchMode::linear:
      return s.mismatch0 + s.group_mismatch * omega;
  }
  return 0.0;
}

// Full rectangle bandwidth 2 |alpha| L / |D| in rad/s.
inline double rect_bandwidth(const CrystalModel& model) {
  const double d = model.summary.group_mismatch;
  if (d == 0.0) throw Error(ErrorKind::degenerate_configuration, "group-velocity mismatch D is zero");
  return 2.0 * std::abs(model.spec.alpha_per_cm2) * model.spec.length_cm / std::abs(d);
}

struct GridDefaults {
  std::size_t count = std::size_t{1} << 16;
  double span_factor = 3.0;
  double window_lo_nm = 700.0;
  double window_hi_nm = 1400.0;
};

// Centred grid spanning span_factor times the rect bandwidth. For weak or zero
// chirp the span is floored at 64 sinc lobes of the periodic crystal.
inline UniformGrid approximation_grid(const CrystalModel& model, const GridDefaults& g = {}) {
  const double d = std::abs(model.summary.group_mismatch);
  if (d == 0.0) throw Error(ErrorKind::degenerate_configuration, "group-velocity mismatch D is zero");
  const double lobes = 64.0 * 2.0 * std::numbers::pi / (d * model.spec.length_cm);
  const double band = std::max(rect_bandwidth(model), lobes);
  return UniformGrid::centred(g.span_factor * band / static_cast<double>(g.count), g.count);
}

// Symmetric grid keeping both signal and idler inside the wavelength window.
inline UniformGrid window_grid(const CrystalModel& model, const GridDefaults& g = {}) {
  const double w0 = model.summary.omega0;
  const double w_short = omega_from_wavelength_um(g.window_lo_nm * 1e-3);
  const double w_long = omega_from_wavelength_um(g.window_hi_nm * 1e-3);
  const double half = std::min(w_short - w0, w0 - w_long);
  if (!(half > 0.0))
    throw Error(ErrorKind::range, "wavelength window does not contain the degenerate wavelength");
  return UniformGrid::spanning(-half, half, g.count);
}

inline UniformGrid default_grid(const CrystalModel& model, MismatchMode mode, const GridDefaults& g = {}) {
  return mode == MismatchMode::exact ? window_grid(model, g) : approximation_grid(model, g);
}

struct TpsaOptions {
  QuadratureOptions quadrature{.order = 6};
};

// F(Omega) = exp(-i (dk(Omega) - dk0) L/2) * int_{-L/2}^{L/2} exp(i q(Omega) xi - i alpha xi^2) dxi
//
// with q = dk(Omega) + K0 in exact mode. The quadratic and linear modes are
// expansions about exact quasi-phasematching, so there q = dk(Omega) - dk0.
// Values are scaled so that max |F| = 1; the prefactor phase is kept.
inline SpectralAmplitude tpsa_numeric(const CrystalModel& model, const UniformGrid& grid,
                                      MismatchMode mode, const TpsaOptions& opt = {}) {
  model.spec.validate();
  const auto& s = model.summary;
  const double half = model.spec.half_length();
  const ChirpedExponentialIntegral integral(-half, half, model.spec.alpha_per_cm2, opt.quadrature);

  std::vector<complex> values(grid.count());
  parallel_for(grid.count(), [&](std::size_t i) {
    const double omega = grid[i];
    const double dk = phase_mismatch(model, omega, mode);
    const double q = mode == MismatchMode::exact ? dk + model.spec.grating_k0_per_cm : dk - s.mismatch0;
    const complex prefactor = std::polar(1.0, -(dk - s.mismatch0) * half);
    values[i] = prefactor * integral(q).value;
  });

  double peak = 0.0;
  for (const auto& v : values) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) throw Error(ErrorKind::invalid_spec, "spectral amplitude vanishes on the grid");
  for (auto& v : values) v /= peak;

  SpectralAmplitude out{ComplexCurve(grid, std::move(values)), s.omega0,
                        "numeric/" + std::string(to_string(mode)), peak, {}};
  if (mode == MismatchMode::exact && model.spec.min_local_grating() <= 0.0)
    out.warnings.push_back("local grating wavenumber is not positive over the whole crystal");
  return out;
}

inline double broadening_ratio(const CrystalSpec& spec) {
  return std::abs(spec.alpha_per_cm2) * 4.0 * spec.length_cm * spec.length_cm /
         (std::numbers::pi * std::numbers::pi);
}

// Closed forms of the linear-mismatch amplitude (unnormalized):
//   erf   exp(-i D W L/2 + i D^2 W^2 / 4a) [erf(s (L a - D W)/2) + erf(s (L a + D W)/2)],
//         s = principal sqrt(i/a)
//   rect  the same quadratic-phase prefactor on |W| <= |a| L / |D|, zero outside.
inline complex tpsa_closed_form(const CrystalModel& model, double omega, ClosedForm kind) {
  const double d = model.summary.group_mismatch;
  const double a = model.spec.alpha_per_cm2;
  const double len = model.spec.length_cm;
  if (d == 0.0) throw Error(ErrorKind::degenerate_configuration, "group-velocity mismatch D is zero");
  if (a == 0.0) throw Error(ErrorKind::invalid_spec, "closed forms need a nonzero chirp alpha");
  const complex prefactor = std::polar(1.0, -d * omega * len / 2.0 + d * d * omega * omega / (4.0 * a));
  if (kind == ClosedForm::rect) {
    const bool inside = std::abs(omega) <= std::abs(a) * len / std::abs(d);
    return inside ? prefactor : complex{};
  }
  const complex s = sqrt_i_over(a);
  return prefactor * (complex_erf(s * (len * a - d * omega) / 2.0) +
                      complex_erf(s * (len * a + d * omega) / 2.0));
}

// Closed form sampled on a grid and normalized like tpsa_numeric.
inline SpectralAmplitude tpsa_closed_form(const CrystalModel& model, const UniformGrid& grid,
                                          ClosedForm kind) {
  std::vector<complex> values(grid.count());
  for (std::size_t i = 0; i < grid.count(); ++i) values[i] = tpsa_closed_form(model, grid[i], kind);
  double peak = 0.0;
  for (const auto& v : values) peak = std::max(peak, std::abs(v));
  if (!(peak > 0.0)) throw Error(ErrorKind::invalid_spec, "closed-form amplitude vanishes on the grid");
  for (auto& v : values) v /= peak;
  SpectralAmplitude out{ComplexCurve(grid, std::move(values)), model.summary.omega0,
                        "closed/" + std::string(to_string(kind)), peak, {}};
  if (kind == ClosedForm::rect && broadening_ratio(model.spec) < 10.0)
    out.warnings.push_back("rect form used with broadening ratio below 10");
  return out;
}

}  // namespace biphoton
