#pragma once

#include <cmath>
#include <limits>

#include "biphoton/crystal/tpsa.hpp"

namespace biphoton {

struct ConditionThresholds {
  double broadening_min = 10.0;
  double gvd_max = 0.3;
};

// Validity diagnostics for the approximations behind the closed forms.
//   broadening_ratio  |alpha| 4 L^2 / pi^2      large-chirp (rect) regime when >> 1
//   gvd_ratio         |kappa L alpha / D^2|     crystal GVD negligible when << 1
//   edge_gvd_ratio    |kappa Omega_edge / D| at Omega_edge = |alpha| L / |D|
struct ConditionReport {
  double broadening_ratio = 0.0;
  double gvd_ratio = 0.0;
  double edge_gvd_ratio = 0.0;
  bool broadening_ok = false;
  bool gvd_ok = false;
  bool edge_gvd_ok = false;
  ConditionThresholds thresholds{};
};

inline ConditionReport condition_report(const CrystalModel& model, const ConditionThresholds& t = {}) {
  const double len = model.spec.length_cm;
  const double a = model.spec.alpha_per_cm2;
  const double d = model.summary.group_mismatch;
  const double kappa = model.summary.gvd_mean;

  ConditionReport r;
  r.thresholds = t;
  r.broadening_ratio = broadening_ratio(model.spec);
  if (d == 0.0) {
    r.gvd_ratio = r.edge_gvd_ratio = std::numeric_limits<double>::infinity();
  } else {
    r.gvd_ratio = std::abs(kappa * len * a / (d * d));
    const double edge = std::abs(a) * len / std::abs(d);
    r.edge_gvd_ratio = std::abs(kappa * edge / d);
  }
  r.broadening_ok = r.broadening_ratio > t.broadening_min;
  r.gvd_ok = r.gvd_ratio < t.gvd_max;
  r.edge_gvd_ok = r.edge_gvd_ratio < t.gvd_max;
  return r;
}

}  // namespace biphoton
