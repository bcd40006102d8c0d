#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "biphoton/numerics/error.hpp"

namespace biphoton {

using complex = std::complex<double>;

// Uniformly spaced axis. Samples are computed as start + i*step on demand so
// no rounding accumulates along the grid.
class UniformGrid {
 public:
  UniformGrid(double start, double step, std::size_t count)
      : start_(start), step_(step), count_(count) {
    if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(start))
      throw Error(ErrorKind::invalid_grid, "grid step must be finite and positive");
    if (count < 2) throw Error(ErrorKind::invalid_grid, "grid needs at least two samples");
  }

  // Grid of `count` samples centred on zero: sample count/2 sits at 0.
  static UniformGrid centred(double step, std::size_t count) {
    return UniformGrid(-static_cast<double>(count / 2) * step, step, count);
  }

  // `count` samples covering [lo, hi) with hi excluded.
  static UniformGrid spanning(double lo, double hi, std::size_t count) {
    return UniformGrid(lo, (hi - lo) / static_cast<double>(count), count);
  }

  double start() const noexcept { return start_; }
  double step() const noexcept { return step_; }
  std::size_t count() const noexcept { return count_; }
  double span() const noexcept { return step_ * static_cast<double>(count_); }
  double last() const noexcept { return at(count_ - 1); }

  double at(std::size_t i) const noexcept { return start_ + static_cast<double>(i) * step_; }
  double operator[](std::size_t i) const noexcept { return at(i); }

  std::vector<double> samples() const {
    std::vector<double> out(count_);
    for (std::size_t i = 0; i < count_; ++i) out[i] = at(i);
    return out;
  }

  bool same_as(const UniformGrid& other, double rel_tol = 1e-12) const noexcept {
    return count_ == other.count_ &&
           std::abs(step_ - other.step_) <= rel_tol * step_ &&
           std::abs(start_ - other.start_) <= rel_tol * span();
  }

 private:
  double start_;
  double step_;
  std::size_t count_;
};

// Complex samples on a uniform grid.
class ComplexCurve {
 public:
  ComplexCurve(UniformGrid grid, std::vector<complex> values)
      : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.count())
      throw Error(ErrorKind::invalid_grid, "curve length " + std::to_string(values_.size()) +
                                               " does not match grid count " +
                                               std::to_string(grid_.count()));
    for (const auto& v : values_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw Error(ErrorKind::invalid_grid, "curve contains non-finite values");
  }

  const UniformGrid& grid() const noexcept { return grid_; }
  std::span<const complex> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const complex& operator[](std::size_t i) const noexcept { return values_[i]; }

  std::vector<double> modulus_squared() const {
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) out[i] = std::norm(values_[i]);
    return out;
  }

  // Riemann sum of |f|^2 times the grid step.
  double energy() const noexcept {
    double sum = 0.0;
    for (const auto& v : values_) sum += std::norm(v);
    return sum * grid_.step();
  }

  double max_modulus() const noexcept {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  UniformGrid grid_;
  std::vector<complex> values_;
};

}  // namespace biphoton
