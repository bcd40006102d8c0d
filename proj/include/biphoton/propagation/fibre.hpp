#pragma once

#include <cmath>
#include <string_view>

#include "biphoton/crystal/tpsa.hpp"
#include "biphoton/dispersion/wavevector.hpp"

namespace biphoton {

enum class FibreModel { quadratic, full };
enum class Arm { signal, idler };

inline std::string_view to_string(FibreModel m) { return m == FibreModel::quadratic ? "quadratic" : "full"; }
inline std::string_view to_string(Arm a) { return a == Arm::signal ? "signal" : "idler"; }

// Fibre traversed by one photon of the pair. Only material (bulk) dispersion
// is modelled. The quadratic model keeps k' and kappa_f = k''/2 at omega0;
// the full model evaluates k(omega) of the traversing photon directly.
struct FibreSpec {
  MaterialModel material;
  FibreModel model = FibreModel::quadratic;
  Arm arm = Arm::idler;
  double omega0 = 0.0;
  double k0 = 0.0;      // rad/cm
  double k1 = 0.0;      // s/cm
  double kappa = 0.0;   // s^2/cm, half the second derivative
  // Drop the constant and linear (pure delay) parts of the phase so the
  // wavepacket stays centred in the time window.
  bool remove_group_delay = true;

  static FibreSpec build(const MaterialModel& material, double omega0, FibreModel model = FibreModel::quadratic,
                         Arm arm = Arm::idler) {
    FibreSpec f{material, model, arm, omega0};
    f.k0 = wavevector(material, omega0, 0);
    f.k1 = wavevector(material, omega0, 1);
    f.kappa = 0.5 * wavevector(material, omega0, 2);
    return f;
  }

  // +1 when the fibre carries the signal (omega0 + Omega), -1 for the idler.
  double arm_sign() const noexcept { return arm == Arm::signal ? 1.0 : -1.0; }
};

// Spectral phase (rad) picked up at detuning Omega after a length l (cm).
inline double fibre_phase(const FibreSpec& fibre, double length_cm, double omega) {
  if (!(length_cm >= 0.0)) throw Error(ErrorKind::invalid_spec, "fibre length must be non-negative");
  const double sigma = fibre.arm_sign();
  if (fibre.model == FibreModel::quadratic) {
    const double linear = fibre.remove_group_delay ? 0.0 : sigma * fibre.k1 * omega;
    return (linear + fibre.kappa * omega * omega) * length_cm;
  }
  const double k = wavevector(fibre.material, fibre.omega0 + sigma * omega, 0);
  if (!fibre.remove_group_delay) return k * length_cm;
  return (k - fibre.k0 - sigma * fibre.k1 * omega) * length_cm;
}

// Pointwise multiplication by exp(i * fibre_phase); |F| is unchanged.
inline SpectralAmplitude apply_fibre(const SpectralAmplitude& input, const FibreSpec& fibre, double length_cm) {
  if (std::abs(input.omega0 - fibre.omega0) > 1e-9 * fibre.omega0)
    throw Error(ErrorKind::grid_mismatch, "fibre and spectrum are referenced to different centre frequencies");
  const auto& grid = input.grid();
  std::vector<complex> values(grid.count());
  for (std::size_t i = 0; i < grid.count(); ++i)
    values[i] = input.curve[i] * std::polar(1.0, fibre_phase(fibre, length_cm, grid[i]));
  SpectralAmplitude out{ComplexCurve(grid, std::move(values)), input.omega0, input.source,
                        input.normalization, input.warnings};
  return out;
}

}  // namespace biphoton
