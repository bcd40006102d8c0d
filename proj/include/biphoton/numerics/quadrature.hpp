#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "biphoton/numerics/grid.hpp"

namespace biphoton {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// Nodes and weights by Newton iteration on the three-term Legendre recurrence.
inline GaussLegendreRule gauss_legendre(int order) {
  if (order < 1) throw Error(ErrorKind::invalid_spec, "Gauss-Legendre order must be positive");
  GaussLegendreRule rule{std::vector<double>(order), std::vector<double>(order)};
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= order; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
      }
      dp = order * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Final derivative at the converged node.
    double p0 = 1.0, p1 = 0.0;
    for (int k = 1; k <= order; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
    }
    dp = order * (x * p0 - p1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

struct QuadratureOptions {
  double max_phase_per_panel = std::numbers::pi / 4.0;
  int order = 8;
  double rel_tol = 1e-8;
  // Absolute floor relative to the integral of |f|, for integrands that cancel to ~0.
  double abs_floor = 1e-14;
  int max_doublings = 20;
};

// Thrown when panel doubling does not settle; carries the last two estimates.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, complex previous, complex last)
      : Error(ErrorKind::convergence_failure, message), previous_(previous), last_(last) {}
  complex previous() const noexcept { return previous_; }
  complex last() const noexcept { return last_; }

 private:
  complex previous_;
  complex last_;
};

struct QuadratureResult {
  complex value;
  complex coarse;       // estimate at half the final panel count
  std::size_t panels;
};

namespace detail {

inline std::size_t initial_panels(double phase_rate, double a, double b, double max_phase) {
  const double excursion = std::abs(phase_rate) * (b - a);
  const double n = std::ceil(excursion / max_phase);
  return n < 1.0 ? std::size_t{1} : static_cast<std::size_t>(n);
}

template <typename Sum>
QuadratureResult doubling_loop(Sum&& composite, std::size_t panels, const QuadratureOptions& opt) {
  complex previous = composite(panels).first;
  complex last = previous;
  for (int d = 0; d < opt.max_doublings; ++d) {
    panels *= 2;
    auto [fine, fine_abs] = composite(panels);
    last = fine;
    const double diff = std::abs(fine - previous);
    if (diff <= opt.rel_tol * std::abs(fine) || diff <= opt.abs_floor * fine_abs)
      return {fine, previous, panels};
    if (d + 1 < opt.max_doublings) previous = fine;
  }
  std::ostringstream msg;
  msg.precision(17);
  msg << "oscillatory quadrature did not converge after " << opt.max_doublings
      << " panel doublings (last estimates " << previous << ", " << last << ")";
  throw ConvergenceError(msg.str(), previous, last);
}

}  // namespace detail

// Composite Gauss-Legendre integral of f over [a, b]. `phase_rate` bounds
// |d(phase)/dx| of the integrand so the starting panel width keeps the phase
// change per panel at most opt.max_phase_per_panel; the panel count is then
// doubled until two successive estimates agree to opt.rel_tol.
template <typename F>
  requires std::invocable<F&, double>
QuadratureResult oscillatory_quadrature(F&& f, double a, double b, double phase_rate,
                                        const QuadratureOptions& opt = {}) {
  if (!(a < b)) throw Error(ErrorKind::invalid_spec, "quadrature interval needs a < b");
  const GaussLegendreRule rule = gauss_legendre(opt.order);
  auto composite = [&](std::size_t panels) {
    const double h = (b - a) / static_cast<double>(panels);
    complex sum{};
    double abs_sum = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = a + (static_cast<double>(p) + 0.5) * h;
      complex panel{};
      double panel_abs = 0.0;
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
        const complex v = f(mid + 0.5 * h * rule.nodes[j]);
        panel += rule.weights[j] * v;
        panel_abs += rule.weights[j] * std::abs(v);
      }
      sum += 0.5 * h * panel;
      abs_sum += 0.5 * h * panel_abs;
    }
    return std::pair{sum, abs_sum};
  };
  std::size_t start = detail::initial_panels(phase_rate, a, b, opt.max_phase_per_panel);
  // Doubling starts from half the phase-limited count, so the first accepted
  // estimate already satisfies the phase-per-panel bound.
  return detail::doubling_loop(composite, std::max<std::size_t>(1, (start + 1) / 2), opt);
}

// The same composite rule specialised to exp(i(k x - c x^2)) on [lo, hi].
// Exponentials are advanced panel to panel by a second-order phase recurrence
// (re-anchored with exact sin/cos every few panels), which removes the
// per-node transcendental calls of the generic routine.
class ChirpedExponentialIntegral {
 public:
  ChirpedExponentialIntegral(double lo, double hi, double chirp, QuadratureOptions opt = {})
      : lo_(lo), hi_(hi), chirp_(chirp), opt_(opt), rule_(gauss_legendre(opt.order)) {
    if (!(lo < hi)) throw Error(ErrorKind::invalid_spec, "quadrature interval needs lo < hi");
  }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double chirp() const noexcept { return chirp_; }

  // Largest |d(phase)/dx| over the interval for wavenumber k.
  double phase_rate(double k) const noexcept {
    const double edge = std::max(std::abs(lo_), std::abs(hi_));
    return std::abs(k) + 2.0 * std::abs(chirp_) * edge;
  }

  QuadratureResult operator()(double k) const {
    auto composite = [&](std::size_t panels) { return sum(k, panels); };
    const std::size_t start =
        detail::initial_panels(phase_rate(k), lo_, hi_, opt_.max_phase_per_panel);
    return detail::doubling_loop(composite, std::max<std::size_t>(1, (start + 1) / 2), opt_);
  }

  // Single composite evaluation with a fixed panel count; no self-check.
  complex fixed(double k, std::size_t panels) const { return sum(k, panels).first; }

 private:
  static constexpr std::size_t kMaxOrder = 16;
  static constexpr std::size_t kAnchorEvery = 64;

  std::pair<complex, double> sum(double k, std::size_t panels) const {
    const std::size_t m = rule_.nodes.size();
    if (m <= 4) return lanes<4>(k, panels);
    if (m <= 6) return lanes<6>(k, panels);
    if (m <= 8) return lanes<8>(k, panels);
    if (m <= kMaxOrder) return lanes<kMaxOrder>(k, panels);
    // Orders above the unrolled width fall back to direct evaluation.
    return slow_sum(k, panels);
  }

  template <std::size_t W>
  std::pair<complex, double> lanes(double k, std::size_t panels) const {
    const std::size_t m = rule_.nodes.size();
    const double h = (hi_ - lo_) / static_cast<double>(panels);
    const double c = chirp_;
    std::array<double, W> s{}, hw{}, zr{}, zi{}, rr{}, ri{}, ar{}, ai{};
    for (std::size_t j = 0; j < m; ++j) {
      s[j] = lo_ + 0.5 * h * (1.0 + rule_.nodes[j]);
      hw[j] = 0.5 * h * rule_.weights[j];
    }
    const double qphase = -2.0 * c * h * h;
    const double qr = std::cos(qphase), qi = std::sin(qphase);

    for (std::size_t p0 = 0; p0 < panels; p0 += kAnchorEvery) {
      const double shift = static_cast<double>(p0) * h;
      for (std::size_t j = 0; j < m; ++j) {
        const double x = s[j] + shift;
        const double phase = k * x - c * x * x;
        zr[j] = std::cos(phase);
        zi[j] = std::sin(phase);
        const double step = h * (k - 2.0 * c * x) - c * h * h;
        rr[j] = std::cos(step);
        ri[j] = std::sin(step);
      }
      const std::size_t p1 = std::min(panels, p0 + kAnchorEvery);
      for (std::size_t p = p0; p < p1; ++p) {
        for (std::size_t j = 0; j < W; ++j) {
          ar[j] += hw[j] * zr[j];
          ai[j] += hw[j] * zi[j];
          const double nzr = zr[j] * rr[j] - zi[j] * ri[j];
          const double nzi = zr[j] * ri[j] + zi[j] * rr[j];
          zr[j] = nzr;
          zi[j] = nzi;
          const double nrr = rr[j] * qr - ri[j] * qi;
          const double nri = rr[j] * qi + ri[j] * qr;
          rr[j] = nrr;
          ri[j] = nri;
        }
      }
    }
    complex total{};
    double abs_total = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      total += complex(ar[j], ai[j]);
      abs_total += hw[j] * static_cast<double>(panels);
    }
    return {total, abs_total};
  }

  std::pair<complex, double> slow_sum(double k, std::size_t panels) const {
    const double h = (hi_ - lo_) / static_cast<double>(panels);
    complex total{};
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = lo_ + (static_cast<double>(p) + 0.5) * h;
      for (std::size_t j = 0; j < rule_.nodes.size(); ++j) {
        const double x = mid + 0.5 * h * rule_.nodes[j];
        total += 0.5 * h * rule_.weights[j] * std::polar(1.0, k * x - chirp_ * x * x);
      }
    }
    return {total, hi_ - lo_};
  }

  double lo_;
  double hi_;
  double chirp_;
  QuadratureOptions opt_;
  GaussLegendreRule rule_;
};

}  // namespace biphoton
