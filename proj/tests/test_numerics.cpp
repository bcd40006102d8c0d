#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "biphoton/numerics/erf.hpp"
#include "biphoton/numerics/fft.hpp"
#include "biphoton/numerics/parallel.hpp"
#include "biphoton/numerics/quadrature.hpp"
#include "biphoton/numerics/width.hpp"

using namespace biphoton;
using std::numbers::pi;

namespace {

double rel_err(complex a, complex b) { return std::abs(a - b) / std::abs(b); }

ComplexCurve sampled(const UniformGrid& g, auto&& f) {
  std::vector<complex> v(g.count());
  for (std::size_t i = 0; i < g.count(); ++i) v[i] = f(g[i]);
  return ComplexCurve(g, std::move(v));
}

}  // namespace

// ---------------------------------------------------------------- FFT

TEST(Fourier, DeltaGivesConstantModulus) {
  const UniformGrid g = UniformGrid::centred(0.5, 256);
  std::vector<complex> v(256);
  v[77] = {2.0, -1.0};
  const auto r = fourier_transform(ComplexCurve(g, v));
  const double expected = 0.5 / std::sqrt(2.0 * pi) * std::abs(v[77]);
  for (const auto& x : r.curve.values()) EXPECT_NEAR(std::abs(x), expected, 1e-14);
}

TEST(Fourier, RectFirstZeroAtTwoPiOverWidth) {
  const std::size_t n = 4096, m = 64;
  const UniformGrid g = UniformGrid::centred(1.0, n);
  std::vector<complex> v(n);
  for (std::size_t i = n / 2 - m / 2; i < n / 2 + m / 2; ++i) v[i] = 1.0;
  const auto r = fourier_transform(ComplexCurve(g, v));
  // tau = 2 pi / (m step) lies n/m samples from the centre
  const std::size_t j = n / 2 + n / m;
  EXPECT_NEAR(r.curve.grid()[j], 2.0 * pi / m, 1e-12);
  EXPECT_LT(std::abs(r.curve[j]), 1e-12 * std::abs(r.curve[n / 2]));
  EXPECT_GT(std::abs(r.curve[j - 1]), 1e-3 * std::abs(r.curve[n / 2]));
}

TEST(Fourier, ParsevalHolds) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> d;
  const UniformGrid g(-3.7e14, 1.3e10, 8192);
  std::vector<complex> v(g.count());
  for (auto& x : v) x = {d(rng), d(rng)};
  const ComplexCurve c(g, v);
  const auto r = fourier_transform(c);
  EXPECT_NEAR(r.curve.energy() / c.energy(), 1.0, 1e-10);
  const auto back = fourier_transform(c, -1);
  EXPECT_NEAR(back.curve.energy() / c.energy(), 1.0, 1e-10);
}

TEST(Fourier, GaussianPairAndSignConvention) {
  // int dW/sqrt(2 pi) exp(-W^2/2) exp(-i W t0) exp(+i W t) = exp(-(t - t0)^2 / 2)
  const double t0 = 3.0;
  const UniformGrid g = UniformGrid::centred(0.05, 2048);
  const auto c = sampled(g, [&](double w) { return std::exp(-0.5 * w * w) * std::polar(1.0, -w * t0); });
  const auto r = fourier_transform(c, +1);
  const auto& tg = r.curve.grid();
  for (std::size_t j = 0; j < tg.count(); j += 7) {
    const double t = tg[j];
    EXPECT_NEAR(std::abs(r.curve[j] - complex(std::exp(-0.5 * (t - t0) * (t - t0)))), 0.0, 1e-12) << t;
  }
  const auto rev = fourier_transform(c, -1);
  const auto g2 = rev.curve.modulus_squared();
  const auto peak = std::max_element(g2.begin(), g2.end()) - g2.begin();
  EXPECT_NEAR(rev.curve.grid()[static_cast<std::size_t>(peak)], -t0, rev.curve.grid().step());
}

TEST(Fourier, OffCentreGridStartIsHandled) {
  // Same Gaussian sampled on a grid that does not start at -N/2 step.
  const UniformGrid g(-40.0, 0.05, 2048);
  const auto c = sampled(g, [](double w) { return complex(std::exp(-0.5 * w * w)); });
  const auto r = fourier_transform(c);
  for (std::size_t j = 900; j < 1150; ++j) {
    const double t = r.curve.grid()[j];
    EXPECT_NEAR(std::abs(r.curve[j] - complex(std::exp(-0.5 * t * t))), 0.0, 1e-12);
  }
}

TEST(Fourier, NonPowerOfTwoRejected) {
  const UniformGrid g = UniformGrid::centred(1.0, 1000);
  try {
    fourier_transform(ComplexCurve(g, std::vector<complex>(1000, 1.0)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_grid);
  }
}

TEST(Fourier, EdgeLeakageWarns) {
  const UniformGrid g = UniformGrid::centred(1.0, 64);
  const auto quiet = fourier_transform(sampled(g, [](double w) { return complex(std::exp(-0.1 * w * w)); }));
  EXPECT_FALSE(quiet.edge_leakage);
  EXPECT_TRUE(quiet.warnings.empty());
  const auto loud = fourier_transform(sampled(g, [](double) { return complex(1.0); }));
  EXPECT_TRUE(loud.edge_leakage);
  ASSERT_EQ(loud.warnings.size(), 1u);
  EXPECT_NE(loud.warnings[0].find("edge-leakage"), std::string::npos);
}

TEST(Fourier, ZeroPadKeepsStepAndCentre) {
  const UniformGrid g = UniformGrid::centred(0.25, 64);
  const auto c = sampled(g, [](double w) { return complex(1.0 + w); });
  const auto p = zero_pad(c, 4);
  EXPECT_EQ(p.size(), 256u);
  EXPECT_DOUBLE_EQ(p.grid().step(), 0.25);
  EXPECT_NEAR(p.grid()[128], 0.0, 1e-15);
  EXPECT_EQ(p[128], c[32]);
  EXPECT_EQ(p[0], complex{});
  EXPECT_DOUBLE_EQ(p.energy(), c.energy());
}

// ---------------------------------------------------------------- erf

namespace {

// Maclaurin series in long double, used as an oracle for |z| <= 3.
std::complex<long double> erf_oracle(std::complex<long double> z) {
  const std::complex<long double> z2 = z * z;
  std::complex<long double> term = z, sum = z;
  for (int n = 1; n < 400; ++n) {
    term *= -z2 / static_cast<long double>(n);
    const auto add = term / static_cast<long double>(2 * n + 1);
    sum += add;
    if (std::abs(add) < 1e-22L * std::abs(sum)) break;
  }
  return sum * (2.0L / std::sqrt(std::numbers::pi_v<long double>));
}

}  // namespace

TEST(ComplexErf, FrozenHighPrecisionValues) {
  struct Case {
    complex z, expected;
  };
  const double a = 7.0710678118654755, b = 28.284271247461902, c = 9.800499987245548;
  const double d = 38.890872965260115, e = 106.06601717798213;
  const Case cases[] = {
      {{1, 1}, {1.3161512816979476, 0.19045346923783469}},
      {{0.5, -0.25}, {0.54868936055376218, -0.22199095428837335}},
      {{2, 0}, {0.99532226501895273, 0}},
      {{0, 2}, {0, 18.564802414575553}},
      {{-1.5, 0.7}, {-1.0404046154368714, 0.033625498125576172}},
      {{3.5, 3.5}, {0.88712927123958427, 0.015026380322129921}},
      {{a, a}, {0.94533050371617701, 0.013926504428655615}},
      {{b, -b}, {0.99798111372545846, 0.013959501421441503}},
      {{-c, -c}, {-1.0130189808790537, 0.038567530937024001}},
      {{d, d}, {1.0093177062311701, -0.0042903082489742192}},
      {{e, -e}, {0.99712029914421426, -0.0024195927340915653}},
      {{2.9, 2.95}, {0.89756297306048077, -0.15096151877552245}},
      {{4, 0.3}, {1.000000013182743, 1.0460868310870077e-8}},
      {{0.2, 4}, {1243768.3535693375, 30492.148576466732}},
      {{3.1, 0}, {0.9999883513426328, 0}},
      {{20, 5}, {1, 0}},
  };
  for (const auto& k : cases) EXPECT_LT(rel_err(complex_erf(k.z), k.expected), 1e-12) << k.z;
  const complex w = complex_erf({6, 1});
  EXPECT_NEAR(w.real(), 1.0, 1e-15);
  EXPECT_NEAR(w.imag(), -2.28e-17, 1e-18);
}

TEST(ComplexErf, MatchesSeriesOracleInsideRadiusThree) {
  for (double r : {0.1, 0.7, 1.5, 2.2, 2.99})
    for (int k = 0; k < 24; ++k) {
      const complex z = std::polar(r, 2.0 * pi * k / 24.0 + 0.01);
      const auto o = erf_oracle({z.real(), z.imag()});
      const complex ref(static_cast<double>(o.real()), static_cast<double>(o.imag()));
      EXPECT_LT(rel_err(complex_erf(z), ref), 1e-13) << z;
    }
}

TEST(ComplexErf, OddAndConjugateSymmetric) {
  for (const complex z : {complex(0.3, 0.1), complex(2.5, 4.0), complex(12.0, -11.0), complex(0.2, 5.5),
                          complex(50.0, 49.0)}) {
    EXPECT_LT(rel_err(complex_erf(-z), -complex_erf(z)), 1e-14) << z;
    EXPECT_LT(rel_err(complex_erf(std::conj(z)), std::conj(complex_erf(z))), 1e-14) << z;
  }
}

TEST(ComplexErf, ContinuousAcrossRouteBoundaries) {
  // Across the |z| = 2 circle and the Re z = 1/2 strip edge the jump must
  // match the derivative 2/sqrt(pi) exp(-z^2) times the step.
  auto check = [](complex in, complex out) {
    const complex mid = 0.5 * (in + out);
    const complex slope = 2.0 / std::sqrt(pi) * std::exp(-mid * mid);
    EXPECT_LT(rel_err(complex_erf(out), complex_erf(in) + slope * (out - in)), 1e-13) << mid;
  };
  for (double t = 0.05; t < pi; t += 0.1) check(std::polar(2.0 - 1e-9, t), std::polar(2.0 + 1e-9, t));
  for (double y : {2.5, 3.5, 5.0, 8.0}) check({0.5 - 1e-10, y}, {0.5 + 1e-10, y});
}

TEST(ComplexErf, SqrtIOverAlphaIsPrincipal) {
  for (double alpha : {1200.0, -1200.0, 3.0, -0.5}) {
    const complex s = sqrt_i_over(alpha);
    EXPECT_LT(std::abs(s * s - complex(0.0, 1.0 / alpha)), 1e-15 * std::abs(s * s));
    EXPECT_GT(s.real(), 0.0);
  }
}

// ---------------------------------------------------------------- quadrature

TEST(Quadrature, GaussLegendreIntegratesPolynomialsExactly) {
  for (int order : {2, 6, 8, 12}) {
    const auto rule = gauss_legendre(order);
    for (int p = 0; p < 2 * order; ++p) {
      double s = 0.0;
      for (std::size_t j = 0; j < rule.nodes.size(); ++j) s += rule.weights[j] * std::pow(rule.nodes[j], p);
      const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
      EXPECT_NEAR(s, exact, 1e-14) << order << " " << p;
    }
  }
}

TEST(Quadrature, ConstantIntegrand) {
  const auto r = oscillatory_quadrature([](double) { return complex(1.0); }, -0.4, 0.4, 0.0);
  EXPECT_NEAR(r.value.real(), 0.8, 1e-15);
  EXPECT_NEAR(r.value.imag(), 0.0, 1e-15);
}

TEST(Quadrature, PlaneWaveAnalytic) {
  const double len = 0.8;
  for (double c : {1.0, 250.0, 5000.0, 41000.0}) {
    const auto r = oscillatory_quadrature([&](double x) { return std::polar(1.0, c * x); }, -len / 2, len / 2, c);
    const double exact = 2.0 * std::sin(c * len / 2) / c;
    EXPECT_NEAR(r.value.real(), exact, 1e-8 * std::max(std::abs(exact), 1e-3)) << c;
    EXPECT_NEAR(r.value.imag(), 0.0, 1e-10) << c;
  }
}

TEST(Quadrature, ChirpedKernelMatchesErrorFunctionForm) {
  // int exp(i q x - i a x^2) dx = exp(i q^2/4a) sqrt(pi)/(2c) [erf(c u2) - erf(c u1)],
  // c^2 = i a, u = x - q/(2a)
  const double len = 0.8, h = len / 2;
  for (double a : {-1200.0, 1200.0, -30.0}) {
    const ChirpedExponentialIntegral integral(-h, h, a);
    const complex c = std::sqrt(complex(0.0, a));
    for (double q : {0.0, 100.0, -700.0, 1500.0, 2600.0}) {
      const double shift = q / (2 * a);
      const complex exact = std::polar(1.0, q * q / (4 * a)) * std::sqrt(pi) / (2.0 * c) *
                            (complex_erf(c * (h - shift)) - complex_erf(c * (-h - shift)));
      EXPECT_LT(rel_err(integral(q).value, exact), 1e-8) << a << " " << q;
    }
  }
}

TEST(Quadrature, ChirpedKernelAgreesWithGenericRule) {
  const double a = -1200.0, h = 0.4;
  QuadratureOptions opt;
  opt.order = 6;
  const ChirpedExponentialIntegral fast(-h, h, a, opt);
  for (double k : {-3000.0, -10.0, 0.0, 480.0, 9000.0}) {
    auto f = [&](double x) { return std::polar(1.0, k * x - a * x * x); };
    const auto slow = oscillatory_quadrature(f, -h, h, fast.phase_rate(k), opt);
    const auto quick = fast(k);
    EXPECT_EQ(quick.panels, slow.panels) << k;
    EXPECT_LT(std::abs(quick.value - slow.value), 1e-12 * std::max(1.0, std::abs(slow.value))) << k;
  }
}

TEST(Quadrature, LinearAndAdditive) {
  auto f = [](double x) { return std::polar(1.0, 300.0 * x * x + 40.0 * x); };
  auto g = [](double x) { return complex(std::cos(7.0 * x), x * x); };
  const complex ca(2.0, -1.0), cb(0.5, 3.0);
  const double rate = 700.0;
  const auto lhs = oscillatory_quadrature([&](double x) { return ca * f(x) + cb * g(x); }, -1.0, 1.0, rate);
  const auto rf = oscillatory_quadrature(f, -1.0, 1.0, rate);
  const auto rg = oscillatory_quadrature(g, -1.0, 1.0, rate);
  EXPECT_LT(rel_err(lhs.value, ca * rf.value + cb * rg.value), 1e-8);
  const auto left = oscillatory_quadrature(f, -1.0, 0.3, rate);
  const auto right = oscillatory_quadrature(f, 0.3, 1.0, rate);
  EXPECT_LT(rel_err(left.value + right.value, rf.value), 1e-8);
}

TEST(Quadrature, AcceptedEstimateAgreesWithCoarseOne) {
  const ChirpedExponentialIntegral integral(-0.4, 0.4, -1200.0);
  const auto r = integral(1234.0);
  EXPECT_LE(std::abs(r.value - r.coarse), 1e-8 * std::abs(r.value));
  EXPECT_EQ(integral.fixed(1234.0, r.panels), r.value);
}

TEST(Quadrature, ConvergenceFailureCarriesEstimates) {
  QuadratureOptions opt;
  opt.max_doublings = 3;
  opt.rel_tol = 1e-15;
  opt.abs_floor = 0.0;
  // sqrt-singular integrand converges only algebraically
  auto f = [](double x) { return complex(1.0 / std::sqrt(std::abs(x) + 1e-300)); };
  try {
    oscillatory_quadrature(f, -1.0, 1.0, 0.0, opt);
    FAIL() << "expected a convergence failure";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::convergence_failure);
    EXPECT_NE(e.previous(), e.last());
    EXPECT_LT(std::abs(e.last() - 4.0), std::abs(e.previous() - 4.0));
  }
}

TEST(Quadrature, EmptyIntervalRejected) {
  EXPECT_THROW(oscillatory_quadrature([](double) { return complex(1.0); }, 1.0, 1.0, 0.0), Error);
}

// ---------------------------------------------------------------- widths

namespace {

double sinc2(double x) { return x == 0.0 ? 1.0 : std::pow(std::sin(x) / x, 2); }

// Half-maximum point of sinc^2 by bisection on [1, 2].
double sinc2_half_point() {
  double lo = 1.0, hi = 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (sinc2(mid) > 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> sample(const UniformGrid& g, auto&& f) {
  std::vector<double> y(g.count());
  for (std::size_t i = 0; i < g.count(); ++i) y[i] = f(g[i]);
  return y;
}

}  // namespace

TEST(Width, Gaussian) {
  const double sigma = 1.7;
  const UniformGrid g = UniformGrid::centred(0.01, 4096);
  const auto w = fwhm(sample(g, [&](double x) { return std::exp(-x * x / (2 * sigma * sigma)); }), g);
  EXPECT_NEAR(w.fwhm, 2.0 * std::sqrt(2.0 * std::log(2.0)) * sigma, 1e-5);
  EXPECT_FALSE(w.multimodal);
  EXPECT_LT(w.sidelobe_ratio, 1e-12);
}

TEST(Width, Rectangle) {
  const UniformGrid g = UniformGrid::centred(0.01, 2048);
  const auto w = fwhm(sample(g, [](double x) { return std::abs(x) <= 3.0 ? 1.0 : 0.0; }), g);
  EXPECT_NEAR(w.fwhm, 6.0, 2 * g.step());
}

TEST(Width, SincSquaredMainLobeAndSidelobe) {
  const double x_half = sinc2_half_point();
  EXPECT_NEAR(x_half, 1.39156, 1e-5);
  const UniformGrid g = UniformGrid::centred(0.001, 1 << 15);
  const auto w = fwhm(sample(g, sinc2), g);
  EXPECT_NEAR(w.fwhm, 2.0 * x_half, 1e-6);
  // first side lobe of sinc^2 near x = 4.4934
  EXPECT_NEAR(w.sidelobe_ratio, sinc2(4.493409457909064), 1e-6);
  EXPECT_FALSE(w.multimodal);
}

TEST(Width, UnderResolvedLobeRejected) {
  const UniformGrid g = UniformGrid::centred(1.0, 256);
  try {
    fwhm(sample(g, [](double x) { return std::exp(-x * x / 4.0); }), g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::under_resolved);
  }
}

TEST(Width, LobeTouchingEdgeRejected) {
  const UniformGrid g = UniformGrid::centred(1.0, 64);
  try {
    fwhm(std::vector<double>(64, 1.0), g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::range);
  }
}

TEST(Width, TwoPeaksFlaggedMultimodal) {
  const UniformGrid g = UniformGrid::centred(0.01, 4096);
  auto bump = [](double x, double c, double a) { return a * std::exp(-(x - c) * (x - c) * 8.0); };
  const auto w = fwhm(sample(g, [&](double x) { return bump(x, -5, 1.0) + bump(x, 5, 0.8); }), g);
  EXPECT_TRUE(w.multimodal);
  EXPECT_NEAR(g[w.peak_index], -5.0, 0.01);
  EXPECT_NEAR(w.fwhm, 2.0 * std::sqrt(std::log(2.0) / 8.0), 1e-4);
  EXPECT_NEAR(w.sidelobe_ratio, 0.8, 1e-3);
}

// ---------------------------------------------------------------- parallel

TEST(Parallel, EveryIndexOnceAndExceptionsPropagate) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; }, 4);
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(100, [](std::size_t i) {
    if (i == 37) throw Error(ErrorKind::range, "boom");
  }, 4), Error);
}
