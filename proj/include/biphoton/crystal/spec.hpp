#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "biphoton/dispersion/material.hpp"

namespace biphoton {

// Which principal axis each wave is polarized along. Propagation is along x,
// so type-II pairs use y and z. The idler is the y-polarized photon (same as
// the pump) and the signal the z-polarized one.
struct Polarization {
  Axis pump = Axis::y;
  Axis signal = Axis::z;
  Axis idler = Axis::y;
};

// Linearly chirped poling. With xi = z + L/2 in [-L/2, L/2] the nonlinearity
// phase is K0*xi - alpha*xi^2, so the local grating wavenumber is K0 - 2*alpha*xi.
struct CrystalSpec {
  double length_cm = 0.8;
  double grating_k0_per_cm = 2441.8;
  double alpha_per_cm2 = -1200.0;
  double pump_nm = 458.0;
  std::string material = "KTP";
  Polarization polarization{};

  double half_length() const noexcept { return 0.5 * length_cm; }

  void validate() const {
    if (!(length_cm > 0.0) || !std::isfinite(length_cm))
      throw Error(ErrorKind::invalid_spec, "crystal length must be positive");
    if (!(pump_nm > 0.0) || !std::isfinite(pump_nm))
      throw Error(ErrorKind::invalid_spec, "pump wavelength must be positive");
    if (!std::isfinite(alpha_per_cm2) || !std::isfinite(grating_k0_per_cm))
      throw Error(ErrorKind::invalid_spec, "grating parameters must be finite");
  }

  // Smallest local grating wavenumber over the crystal; must stay positive for
  // the poling to be realizable.
  double min_local_grating() const noexcept {
    return grating_k0_per_cm - std::abs(alpha_per_cm2) * length_cm;
  }

  CrystalSpec with_alpha(double alpha) const {
    CrystalSpec out = *this;
    out.alpha_per_cm2 = alpha;
    return out;
  }
};

// Local poling period 2 pi / (K0 - 2 alpha xi) in micrometres.
inline double local_poling_period(const CrystalSpec& spec, double xi_cm) {
  const double half = spec.half_length();
  if (std::abs(xi_cm) > half * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "position " << xi_cm << " cm lies outside the crystal [" << -half << ", " << half << "] cm";
    throw Error(ErrorKind::range, msg.str());
  }
  const double k_local = spec.grating_k0_per_cm - 2.0 * spec.alpha_per_cm2 * xi_cm;
  if (!(k_local > 0.0))
    throw Error(ErrorKind::invalid_spec, "local grating wavenumber is not positive at xi = " +
                                             std::to_string(xi_cm) + " cm");
  return 2.0 * std::numbers::pi / k_local * 1e4;
}

}  // namespace biphoton
