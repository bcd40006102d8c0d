#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "biphoton/numerics/grid.hpp"

namespace biphoton {

namespace detail {

// In-place iterative radix-2 DFT: x_j <- sum_k x_k exp(sign * 2 pi i jk / N).
// Twiddles are taken from a table filled with direct std::polar calls so the
// rounding error does not grow with the stage index.
inline void fft_radix2(std::vector<complex>& x, int sign) {
  const std::size_t n = x.size();
  if (n < 2) return;

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }

  std::vector<complex> twiddle(n / 2);
  const double base = static_cast<double>(sign) * 2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t k = 0; k < n / 2; ++k)
    twiddle[k] = std::polar(1.0, base * static_cast<double>(k));

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const complex& w = twiddle[k * stride];
        const complex a = x[i + k];
        const complex b = x[i + k + half];
        const complex wb(w.real() * b.real() - w.imag() * b.imag(),
                         w.real() * b.imag() + w.imag() * b.real());
        x[i + k] = a + wb;
        x[i + k + half] = a - wb;
      }
    }
  }
}

}  // namespace detail

constexpr double kEdgeLeakageThreshold = 1e-6;

struct FourierResult {
  ComplexCurve curve;
  // Largest end-sample modulus relative to the curve maximum.
  double edge_ratio = 0.0;
  bool edge_leakage = false;
  std::vector<std::string> warnings;
};

// Continuous Fourier transform approximated on a uniform grid,
//
//   G(t_j) = step / sqrt(2 pi) * sum_k F(w_k) exp(sign * i * w_k * t_j),
//
// returned on the centred conjugate grid t_j = (j - N/2) * 2 pi / (N * step).
// With sign = +1 this is F(tau) = int dOmega exp(+i Omega tau) F(Omega); the
// 1/sqrt(2 pi) factor makes the pair unitary, so
// sum |F(w)|^2 dw == sum |G(t)|^2 dt holds to rounding.
inline FourierResult fourier_transform(const ComplexCurve& curve, int sign = +1) {
  const auto& grid = curve.grid();
  const std::size_t n = grid.count();
  if (!std::has_single_bit(n))
    throw Error(ErrorKind::invalid_grid,
                "fourier_transform needs a power-of-two grid, got " + std::to_string(n));
  if (sign != 1 && sign != -1)
    throw Error(ErrorKind::invalid_grid, "transform sign must be +1 or -1");

  const double step = grid.step();
  const double out_step = 2.0 * std::numbers::pi / (static_cast<double>(n) * step);
  const UniformGrid out_grid = UniformGrid::centred(out_step, n);

  std::vector<complex> work(curve.values().begin(), curve.values().end());
  // Sample offset of k -> exp(sign i k step t_j) with t_j = (j - N/2) dt picks
  // up (-1)^k from the centring.
  for (std::size_t k = 1; k < n; k += 2) work[k] = -work[k];
  detail::fft_radix2(work, sign);

  // Start offset phase exp(sign i w_0 t_j), reduced in units of 2 pi.
  const double start_in_steps = grid.start() / step;
  const double scale = step / std::sqrt(2.0 * std::numbers::pi);
  const double half = static_cast<double>(n / 2);
  for (std::size_t j = 0; j < n; ++j) {
    const double cycles = start_in_steps * (static_cast<double>(j) - half) / static_cast<double>(n);
    const double frac = cycles - std::floor(cycles);
    work[j] *= std::polar(scale, static_cast<double>(sign) * 2.0 * std::numbers::pi * frac);
  }

  const double peak = curve.max_modulus();
  const double edge = std::max(std::abs(curve[0]), std::abs(curve[n - 1]));
  FourierResult result{ComplexCurve(out_grid, std::move(work)), 0.0, false, {}};
  result.edge_ratio = peak > 0.0 ? edge / peak : 0.0;
  if (result.edge_ratio >= kEdgeLeakageThreshold) {
    result.edge_leakage = true;
    result.warnings.push_back("edge-leakage: end-sample amplitude is " +
                              std::to_string(result.edge_ratio) + " of the maximum");
  }
  return result;
}

// Extends the curve with zeros on both sides to `factor` times its length,
// keeping the step. The original samples stay centred.
inline ComplexCurve zero_pad(const ComplexCurve& curve, std::size_t factor) {
  if (factor <= 1) return curve;
  const auto& grid = curve.grid();
  const std::size_t n = grid.count();
  const std::size_t total = n * factor;
  const std::size_t offset = (total - n) / 2;
  std::vector<complex> padded(total, complex{});
  std::copy(curve.values().begin(), curve.values().end(), padded.begin() + static_cast<std::ptrdiff_t>(offset));
  const UniformGrid out(grid.start() - static_cast<double>(offset) * grid.step(), grid.step(), total);
  return ComplexCurve(out, std::move(padded));
}

}  // namespace biphoton
