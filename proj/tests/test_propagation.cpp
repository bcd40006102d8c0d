#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "biphoton/propagation/sweep.hpp"

using namespace biphoton;
using std::numbers::pi;

namespace {

const MaterialLibrary& lib() {
  static const MaterialLibrary l = builtin_materials();
  return l;
}

const CrystalModel& model() {
  static const CrystalModel m = CrystalModel::build(CrystalSpec{}, lib());
  return m;
}

FibreSpec fibre(FibreModel kind = FibreModel::quadratic, Arm arm = Arm::idler) {
  return FibreSpec::build(lib().get("fused_silica", Axis::isotropic), model().summary.omega0, kind, arm);
}

UniformGrid grid(const CrystalModel& m, std::size_t n) {
  GridDefaults g;
  g.count = n;
  return approximation_grid(m, g);
}

// erf-form amplitude: same as the linear-mode quadrature up to a constant.
SpectralAmplitude erf_spectrum(const CrystalModel& m, std::size_t n) {
  return tpsa_closed_form(m, grid(m, n), ClosedForm::erf);
}

double l_opt() { return optimal_length(model(), fibre()); }

}  // namespace

TEST(Fibre, ZeroLengthIsIdentity) {
  const auto f = erf_spectrum(model(), 1024);
  for (auto kind : {FibreModel::quadratic, FibreModel::full}) {
    const auto out = apply_fibre(f, fibre(kind), 0.0);
    for (std::size_t i = 0; i < f.grid().count(); ++i) ASSERT_EQ(out.curve[i], f.curve[i]);
  }
}

TEST(Fibre, ModulusPreserved) {
  const auto f = erf_spectrum(model(), 1024);
  for (auto kind : {FibreModel::quadratic, FibreModel::full})
    for (double l : {0.3, 16.9, 250.0}) {
      const auto out = apply_fibre(f, fibre(kind), l);
      for (std::size_t i = 0; i < f.grid().count(); ++i)
        ASSERT_NEAR(std::abs(out.curve[i]), std::abs(f.curve[i]), 1e-15);
    }
}

TEST(Fibre, QuadraticPhaseTerms) {
  FibreSpec fb = fibre();
  EXPECT_NEAR(fb.kappa, 1.359e-28, 0.02 * 1.359e-28);
  const double w = 1.3e14, l = 2.5;
  EXPECT_DOUBLE_EQ(fibre_phase(fb, l, w), fb.kappa * w * w * l);
  fb.remove_group_delay = false;
  EXPECT_DOUBLE_EQ(fibre_phase(fb, l, w), (-fb.k1 * w + fb.kappa * w * w) * l);
  fb.arm = Arm::signal;
  EXPECT_DOUBLE_EQ(fibre_phase(fb, l, w), (fb.k1 * w + fb.kappa * w * w) * l);
}

TEST(Fibre, PhaseAtBandEdgeAfterOptimalLength) {
  const double edge = rect_bandwidth(model()) / 2.0;
  EXPECT_NEAR(fibre_phase(fibre(), l_opt(), edge), 192.0, 2.0);
}

TEST(Fibre, FullModelResidualIsCubic) {
  for (Arm arm : {Arm::idler, Arm::signal}) {
    const FibreSpec full = fibre(FibreModel::full, arm), quad = fibre(FibreModel::quadratic, arm);
    auto residual = [&](double w) { return fibre_phase(full, 1.0, w) - fibre_phase(quad, 1.0, w); };
    const double w = 3e13;
    EXPECT_NEAR(residual(2 * w) / residual(w), 8.0, 0.1);
    EXPECT_LT(std::abs(residual(w) + residual(-w)), 0.05 * std::abs(residual(w)));
  }
  // the arms see mirror-image detunings
  EXPECT_NEAR(fibre_phase(fibre(FibreModel::full, Arm::signal), 3.0, 2e14),
              fibre_phase(fibre(FibreModel::full, Arm::idler), 3.0, -2e14), 1e-9);
}

TEST(Fibre, Errors) {
  EXPECT_THROW(fibre_phase(fibre(), -1.0, 1e13), Error);
  auto f = erf_spectrum(model(), 256);
  f.omega0 *= 1.01;
  try {
    apply_fibre(f, fibre(), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::grid_mismatch);
  }
}

TEST(OptimalLength, ValueAndErrors) {
  const auto& s = model().summary;
  EXPECT_NEAR(l_opt(), -s.group_mismatch * s.group_mismatch / (4.0 * -1200.0 * fibre().kappa), 1e-12);
  EXPECT_NEAR(l_opt(), 16.927, 0.05 * 16.927);
  try {
    optimal_length(model().with_alpha(1200.0), fibre());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::no_compression_solution);
  }
  FibreSpec anomalous = fibre();
  anomalous.kappa = -anomalous.kappa;
  try {
    optimal_length(model(), anomalous);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_spec);
  }
}

TEST(OptimalLength, CancelsSpectralChirp) {
  // fitted quadratic phase over the middle of the band after the fibre
  const auto f = apply_fibre(erf_spectrum(model(), 4096), fibre(), l_opt());
  const double d = model().summary.group_mismatch, len = model().spec.length_cm;
  const double edge = rect_bandwidth(model()) / 2.0;
  double prev = 0.0, offset = 0.0;
  double sxx = 0.0, sxy = 0.0, sx = 0.0, sy = 0.0, sx4 = 0.0, n = 0.0;
  bool first = true;
  for (std::size_t i = 0; i < f.grid().count(); ++i) {
    const double w = f.grid()[i];
    if (std::abs(w) > 0.6 * edge) continue;
    double ph = std::arg(f.curve[i] * std::polar(1.0, d * w * len / 2.0));
    if (!first) {
      while (ph + offset - prev > pi) offset -= 2 * pi;
      while (ph + offset - prev < -pi) offset += 2 * pi;
    }
    first = false;
    prev = ph + offset;
    // y = a + c w^2 (the phase is even once the delay term is removed)
    const double x = w * w;
    sx += x;
    sy += prev;
    sxx += x * x;
    sxy += x * prev;
    sx4 += 1.0;
    n += 1.0;
  }
  const double c = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double chirp = d * d / (4.0 * model().spec.alpha_per_cm2);
  EXPECT_LT(std::abs(c), 0.01 * std::abs(chirp));
}

TEST(Temporal, PeriodicCrystalGivesRectOfWidthDL) {
  const CrystalModel periodic = model().with_alpha(0.0);
  const auto f = tpsa_numeric(periodic, grid(periodic, 8192), MismatchMode::linear);
  const auto t = to_time(f);
  const double dl = std::abs(model().summary.group_mismatch) * model().spec.length_cm;
  EXPECT_NEAR(t.fwhm(), dl, 0.01 * dl);
  EXPECT_GE(t.width.samples_above_half, 32u);
}

TEST(Temporal, AperiodicUncompressedWidthMatchesPeriodic) {
  const CrystalModel periodic = model().with_alpha(0.0);
  const auto tp = to_time(tpsa_numeric(periodic, grid(periodic, 8192), MismatchMode::linear));
  const auto ta = to_time(tpsa_numeric(model(), grid(model(), 8192), MismatchMode::linear));
  EXPECT_NEAR(ta.fwhm() / tp.fwhm(), 1.0, 0.05);
}

TEST(Temporal, EnergyConserved) {
  const auto f = apply_fibre(erf_spectrum(model(), 4096), fibre(), 5.0);
  const auto t = to_time(f);
  EXPECT_NEAR(t.curve.energy() / f.curve.energy(), 1.0, 1e-10);
}

TEST(Temporal, CompressedPulseNearTransformLimit) {
  const auto t = to_time(apply_fibre(erf_spectrum(model(), 8192), fibre(), l_opt()));
  const double limit = 5.5663 / rect_bandwidth(model());
  EXPECT_NEAR(t.fwhm(), limit, 0.02 * limit);
  EXPECT_NEAR(t.sidelobe_ratio(), 0.047, 0.02);
}

TEST(Temporal, PureDelayLeavesShapeAndMovesCentroid) {
  const auto f = erf_spectrum(model(), 8192);
  FibreSpec centred = fibre(), delayed = fibre();
  delayed.remove_group_delay = false;
  // Beyond the time window the delay wraps around, which leaves the shape
  // intact but moves the centroid; check the centroid at a short length.
  for (double l : {0.05, l_opt()}) {
    const auto a = to_time(apply_fibre(f, centred, l));
    const auto b = to_time(apply_fibre(f, delayed, l));
    EXPECT_NEAR(b.fwhm() / a.fwhm(), 1.0, 1e-3) << l;
    // idler carries omega0 - Omega, so its delay appears at tau = +k1 l
    if (l < 0.1) EXPECT_NEAR(b.centroid() - a.centroid(), delayed.k1 * l, 1e-3 * delayed.k1 * l);
  }
}

namespace {

// Pearson correlation between G2(tau) and |F(Omega(tau))|^2, where far beyond
// the compression length tau - D L / 2 = (2 kappa_f l + D^2 / (2 alpha)) Omega.
double far_field_correlation(double length_cm, std::size_t n) {
  const auto f = erf_spectrum(model(), n);
  const auto t = to_time(apply_fibre(f, fibre(), length_cm));
  const auto& s = model().summary;
  const double slope =
      2.0 * fibre().kappa * length_cm + s.group_mismatch * s.group_mismatch / (2.0 * model().spec.alpha_per_cm2);
  const auto g2 = t.g2();
  std::vector<double> x, y;
  for (std::size_t i = 0; i < g2.size(); ++i) {
    const double w = (t.grid()[i] - s.group_mismatch * model().spec.length_cm / 2.0) / slope;
    if (std::abs(w) > 1.2 * rect_bandwidth(model()) / 2.0) continue;
    x.push_back(g2[i]);
    y.push_back(std::norm(tpsa_closed_form(model(), w, ClosedForm::erf)));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST(Temporal, FarFieldFollowsSpectrumAtTenfoldLength) {
  EXPECT_GT(far_field_correlation(10.0 * l_opt(), 16384), 0.99);
}

TEST(Temporal, FarFieldCorrelationApproachesOne) {
  const double c10 = far_field_correlation(10.0 * l_opt(), 65536);
  const double c30 = far_field_correlation(30.0 * l_opt(), 65536);
  const double c60 = far_field_correlation(60.0 * l_opt(), 65536);
  EXPECT_GT(c10, 0.97);
  EXPECT_GT(c30, c10);
  EXPECT_GT(c60, c30);
  EXPECT_GT(c60, 0.99);
}

TEST(Temporal, WrappedDelayWindowWarns) {
  // a 4096-point grid spans only ~7 ps of delay; 30 l_opt stretches G2 far beyond
  const auto t = to_time(apply_fibre(erf_spectrum(model(), 4096), fibre(), 30.0 * l_opt()));
  bool warned = false;
  for (const auto& w : t.warnings) warned |= w.find("delay window") != std::string::npos;
  EXPECT_TRUE(warned);
  const auto ok = to_time(apply_fibre(erf_spectrum(model(), 4096), fibre(), l_opt()));
  for (const auto& w : ok.warnings) EXPECT_EQ(w.find("delay window"), std::string::npos) << w;
}

TEST(Temporal, GridDoublingStable) {
  auto width = [](std::size_t n, double span_factor) {
    GridDefaults g;
    g.count = n;
    g.span_factor = span_factor;
    const auto f = tpsa_closed_form(model(), approximation_grid(model(), g), ClosedForm::erf);
    return to_time(apply_fibre(f, fibre(), l_opt())).fwhm();
  };
  const double base = width(8192, 3.0);
  EXPECT_NEAR(width(16384, 3.0) / base, 1.0, 2e-3);
  EXPECT_NEAR(width(16384, 6.0) / base, 1.0, 2e-3);
}

TEST(Sweep, OrderFollowsInput) {
  const auto f = erf_spectrum(model(), 4096);
  const std::vector<double> lengths = {30.0, 0.0, 16.0, 8.0};
  const auto pts = sweep_fibre(f, fibre(), lengths);
  ASSERT_EQ(pts.size(), lengths.size());
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    EXPECT_EQ(pts[i].length_cm, lengths[i]);
    EXPECT_EQ(pts[i].fwhm_s, measure_at(f, fibre(), lengths[i]).fwhm_s);
  }
  EXPECT_THROW(sweep_fibre(f, fibre(), {1.0, -2.0}), Error);
}

TEST(Sweep, RefinedMinimumNearOptimalLength) {
  const auto f = erf_spectrum(model(), 8192);
  const auto pts = sweep_fibre(f, fibre(), linspace(0.0, 40.0, 41));
  const auto best = refine_minimum(f, fibre(), pts, 0.01);
  EXPECT_NEAR(best.length_cm, l_opt(), 0.05 * l_opt());
  for (const auto& p : pts) EXPECT_GE(p.fwhm_s, best.fwhm_s);
}

TEST(Sweep, PositiveChirpOnlyBroadens) {
  const CrystalModel pos = model().with_alpha(1200.0);
  const auto pts = sweep_fibre(erf_spectrum(pos, 4096), fibre(), linspace(0.0, 50.0, 26));
  for (std::size_t i = 1; i < pts.size(); ++i) EXPECT_GE(pts[i].fwhm_s, pts[i - 1].fwhm_s);
}

TEST(Sweep, Linspace) {
  const auto v = linspace(0.0, 50.0, 201);
  EXPECT_EQ(v.size(), 201u);
  EXPECT_EQ(v.front(), 0.0);
  EXPECT_EQ(v.back(), 50.0);
  EXPECT_DOUBLE_EQ(v[4], 1.0);
  EXPECT_EQ(linspace(3.0, 9.0, 1), std::vector<double>{3.0});
}
