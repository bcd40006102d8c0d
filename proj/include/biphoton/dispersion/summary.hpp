#pragma once

#include "biphoton/crystal/spec.hpp"
#include "biphoton/dispersion/wavevector.hpp"

namespace biphoton {

// Dispersion constants at the degenerate frequency omega0 = pump / 2.
// Units: omega0 rad/s; k_* rad/cm; k1_* s/cm; k2_* s^2/cm.
struct DispersionSummary {
  double omega0 = 0.0;
  double k_pump = 0.0;
  double k_signal = 0.0;
  double k_idler = 0.0;
  double k1_signal = 0.0;
  double k1_idler = 0.0;
  double k2_signal = 0.0;
  double k2_idler = 0.0;
  double group_mismatch = 0.0;  // D = k1_signal - k1_idler
  double gvd_mean = 0.0;        // kappa = (k2_idler + k2_signal) / 2
  double mismatch0 = 0.0;       // k_idler + k_signal - k_pump
};

// Material models resolved for each wave of the crystal.
struct CrystalMaterials {
  MaterialModel pump;
  MaterialModel signal;
  MaterialModel idler;

  static CrystalMaterials resolve(const CrystalSpec& spec, const MaterialLibrary& lib) {
    return {lib.get(spec.material, spec.polarization.pump),
            lib.get(spec.material, spec.polarization.signal),
            lib.get(spec.material, spec.polarization.idler)};
  }
};

inline DispersionSummary dispersion_summary(const CrystalSpec& spec, const CrystalMaterials& mats) {
  spec.validate();
  DispersionSummary s;
  const double omega_pump = omega_from_wavelength_um(spec.pump_nm * 1e-3);
  s.omega0 = 0.5 * omega_pump;
  s.k_pump = wavevector(mats.pump, omega_pump, 0);
  s.k_signal = wavevector(mats.signal, s.omega0, 0);
  s.k_idler = wavevector(mats.idler, s.omega0, 0);
  s.k1_signal = wavevector(mats.signal, s.omega0, 1);
  s.k1_idler = wavevector(mats.idler, s.omega0, 1);
  s.k2_signal = wavevector(mats.signal, s.omega0, 2);
  s.k2_idler = wavevector(mats.idler, s.omega0, 2);
  s.group_mismatch = s.k1_signal - s.k1_idler;
  s.gvd_mean = 0.5 * (s.k2_idler + s.k2_signal);
  s.mismatch0 = s.k_idler + s.k_signal - s.k_pump;
  return s;
}

inline DispersionSummary dispersion_summary(const CrystalSpec& spec, const MaterialLibrary& lib) {
  return dispersion_summary(spec, CrystalMaterials::resolve(spec, lib));
}

// Crystal geometry together with its resolved materials and dispersion constants.
struct CrystalModel {
  CrystalSpec spec;
  CrystalMaterials materials;
  DispersionSummary summary;

  static CrystalModel build(const CrystalSpec& spec, const MaterialLibrary& lib) {
    auto mats = CrystalMaterials::resolve(spec, lib);
    auto summary = dispersion_summary(spec, mats);
    return {spec, std::move(mats), summary};
  }

  // Same crystal with a different chirp; the dispersion constants do not depend on it.
  CrystalModel with_alpha(double alpha) const {
    CrystalModel out = *this;
    out.spec.alpha_per_cm2 = alpha;
    return out;
  }
};

}  // namespace biphoton
