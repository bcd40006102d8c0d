#pragma once

#include <cmath>
#include <numbers>
#include <sstream>

#include "biphoton/dispersion/material.hpp"

namespace biphoton {

inline constexpr double kSpeedOfLight = 2.99792458e10;  // cm/s

inline double wavelength_um_from_omega(double omega) {
  return 2.0 * std::numbers::pi * kSpeedOfLight / omega * 1e4;
}

inline double omega_from_wavelength_um(double lambda_um) {
  return 2.0 * std::numbers::pi * kSpeedOfLight / (lambda_um * 1e-4);
}

struct DerivativeOptions {
  double initial_rel_step = 2e-2;
  double min_rel_step = 1e-6;
  double rel_tol = 1e-8;
};

namespace detail {

inline double k_of(const MaterialModel& m, double omega) {
  return m.refractive_index(wavelength_um_from_omega(omega)) * omega / kSpeedOfLight;
}

// Fourth-order central stencils in omega.
inline double stencil_first(const MaterialModel& m, double w, double d) {
  return (-k_of(m, w + 2 * d) + 8 * k_of(m, w + d) - 8 * k_of(m, w - d) + k_of(m, w - 2 * d)) /
         (12 * d);
}

inline double stencil_second(const MaterialModel& m, double w, double d) {
  return (-k_of(m, w + 2 * d) + 16 * k_of(m, w + d) - 30 * k_of(m, w) + 16 * k_of(m, w - d) -
          k_of(m, w - 2 * d)) /
         (12 * d * d);
}

}  // namespace detail

// k(omega) = n omega / c in rad/cm, and its first (s/cm) and second (s^2/cm)
// omega-derivatives. Derivatives use a fourth-order central stencil whose step
// is halved until two successive estimates agree to opt.rel_tol.
inline double wavevector(const MaterialModel& model, double omega, int order,
                         const DerivativeOptions& opt = {}) {
  if (order == 0) return detail::k_of(model, omega);
  if (order != 1 && order != 2) throw Error(ErrorKind::invalid_spec, "wavevector order must be 0, 1 or 2");

  auto estimate = [&](double rel) {
    const double d = rel * omega;
    const double outer_hi = wavelength_um_from_omega(omega - 2 * d);
    const double outer_lo = wavelength_um_from_omega(omega + 2 * d);
    if (!model.in_range(outer_lo) || !model.in_range(outer_hi)) {
      std::ostringstream msg;
      msg << "derivative stencil [" << outer_lo << ", " << outer_hi << "] um leaves validity range of "
          << model.label();
      throw Error(ErrorKind::range, msg.str());
    }
    return order == 1 ? detail::stencil_first(model, omega, d) : detail::stencil_second(model, omega, d);
  };

  // Shrink the first step if the stencil would leave the validity window.
  double rel = opt.initial_rel_step;
  while (rel > opt.min_rel_step) {
    const double lo = wavelength_um_from_omega(omega * (1 + 2 * rel));
    const double hi = wavelength_um_from_omega(omega * (1 - 2 * rel));
    if (model.in_range(lo) && model.in_range(hi)) break;
    rel *= 0.5;
  }

  // Rounding floor in the natural unit k / omega^order; only matters when the
  // derivative itself vanishes (dispersionless media).
  const double noise_floor = 1e-10 * std::abs(detail::k_of(model, omega)) / std::pow(omega, order);
  double previous = estimate(rel);
  for (rel *= 0.5; rel >= opt.min_rel_step; rel *= 0.5) {
    const double current = estimate(rel);
    const double diff = std::abs(current - previous);
    if (diff <= opt.rel_tol * std::abs(current) || diff <= noise_floor) return current;
    previous = current;
  }
  std::ostringstream msg;
  msg << "derivative of order " << order << " for " << model.label()
      << " did not settle to the requested tolerance";
  throw Error(ErrorKind::convergence_failure, msg.str());
}

}  // namespace biphoton
