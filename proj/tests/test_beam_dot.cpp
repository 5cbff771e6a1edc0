#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cntspin/beam_dot.hpp"
#include "oracles.hpp"

namespace cntspin {
namespace {

constexpr double kL = 400e-9;
constexpr double kU0 = 2.5e-12;
constexpr double kDeltaSo = 370e-6;  // eV

BeamMode paper_beam() { return BeamMode(kL, kU0); }
BeamMode exact_beam() { return BeamMode(kL, kU0, 4.73004074486262); }
DotProfile paper_dot(double alpha_l = 40.0) { return DotProfile::from_alpha(0.5 * kL, alpha_l / kL); }
CouplingParams paper_params(double alpha_l = 40.0) {
  return CouplingParams(kDeltaSo, 0.0, constants::bohr_magneton, paper_beam(), paper_dot(alpha_l));
}

TEST(ModeShape, ClampedEnds) {
  const BeamMode b = paper_beam();
  EXPECT_EQ(mode_shape(0.0, b), 0.0);
  EXPECT_NEAR(mode_shape(kL, b), 0.0, 1e-6);
}

TEST(ModeShape, Midpoint) {
  // Frozen from direct evaluation of the closed form.
  EXPECT_NEAR(mode_shape(0.5 * kL, paper_beam()), 1.5881462616806017, 1e-12);
  const oracle::UnitMode m{4.730};
  EXPECT_NEAR(mode_shape(0.5 * kL, paper_beam()), m.f(0.5), 1e-12);
}

TEST(ModeShape, OutOfRangeIsDomainError) {
  EXPECT_THROW(mode_shape(-1e-12, paper_beam()), DomainError);
  EXPECT_THROW(mode_shape(kL * 1.0001, paper_beam()), DomainError);
  EXPECT_THROW(mode_slope(-1e-12, paper_beam()), DomainError);
  EXPECT_THROW(mode_slope(2 * kL, paper_beam()), DomainError);
}

TEST(ModeShape, NormalizationWithExactRoot) {
  // The exact clamped-clamped root gives int f^2 = l to quadrature accuracy.
  const BeamMode b(kL, kU0, 4.73004074486262);
  const double n = oracle::simpson([&](double z) { return std::pow(mode_shape(z, b), 2); }, 0.0, kL, 20000) / kL;
  EXPECT_NEAR(n - 1.0, 0.0, 1e-6);
}

TEST(ModeShape, NormalizationWithLiteralRootIsOffByTruncation) {
  // beta0 = 4.730 is 4e-5 short of the root; the norm moves by a frozen 8.6138e-6.
  const BeamMode b = paper_beam();
  const double n = oracle::simpson([&](double z) { return std::pow(mode_shape(z, b), 2); }, 0.0, kL, 20000) / kL;
  EXPECT_NEAR(n - 1.0, 8.613791029343787e-06, 1e-9);
}

TEST(ModeSlope, ClampedAndSymmetricWithExactRoot) {
  const BeamMode b = exact_beam();
  EXPECT_EQ(mode_slope(0.0, b), 0.0);
  EXPECT_NEAR(mode_slope(0.5 * kL, b), 0.0, 1e-6 / kL);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 0.5 * kL);
  for (int i = 0; i < 50; ++i) {
    const double d = u(rng);
    EXPECT_NEAR(mode_slope(0.5 * kL + d, b), -mode_slope(0.5 * kL - d, b), 1e-6 / kL);
  }
}

TEST(ModeSlope, LiteralRootBreaksParityByTruncation) {
  // Frozen closed-form value: f'(l/2) l = 1.1714e-4 for beta0 = 4.730.
  const BeamMode b = paper_beam();
  EXPECT_EQ(mode_slope(0.0, b), 0.0);
  EXPECT_NEAR(mode_slope(0.5 * kL, b) * kL, 0.00011714061688145706, 1e-12);
}

TEST(ModeSlope, MatchesFiniteDifference) {
  const BeamMode b = paper_beam();
  for (double x : {0.1, 0.22, 0.4, 0.7, 0.9}) {
    const double z = x * kL, h = 1e-6 * kL;
    const double fd = (mode_shape(z + h, b) - mode_shape(z - h, b)) / (2 * h);
    EXPECT_NEAR(mode_slope(z, b) * kL, fd * kL, 1e-6);
  }
}

TEST(ModeSlope, PeakLocationAndHeight) {
  // Oracle: 1e5-point grid scan refined by golden section.
  const oracle::UnitMode m{4.730};
  double best_x = 0.0, best = 0.0;
  const int n = 100000;
  for (int i = 0; i <= n / 2; ++i) {
    const double x = static_cast<double>(i) / n;
    if (std::abs(m.df(x)) > best) best = std::abs(m.df(x)), best_x = x;
  }
  const double x_star =
      oracle::golden_max([&](double x) { return std::abs(m.df(x)); }, best_x - 1.0 / n, best_x + 1.0 / n, 1e-12);
  EXPECT_NEAR(x_star, 0.22415, 1e-4);
  EXPECT_NEAR(std::abs(mode_slope(x_star * kL, paper_beam())) * kL, 4.8931911173290485, 1e-8);
}

TEST(DensityProfile, NormalizedPeakAndEven) {
  const DotProfile dot = paper_dot();
  const double c = 0.3 * kL;
  const double w = 1.0 / dot.alpha();
  const double mass = oracle::simpson([&](double z) { return density_profile(z, dot, c); }, c - 12 * w, c + 12 * w, 4000);
  EXPECT_NEAR(mass, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(density_profile(c, dot, c), dot.alpha() / std::sqrt(constants::pi));
  for (double d : {0.1 * w, w, 3.7 * w}) {
    EXPECT_NEAR(density_profile(c + d, dot, c) / density_profile(c - d, dot, c), 1.0, 1e-14);
  }
}

TEST(DotProfile, AlphaFromOscillator) {
  const double m = 9.109e-31, w0 = 1e12;
  const DotProfile dot = DotProfile::from_oscillator(1e-7, m, w0);
  EXPECT_NEAR(dot.alpha() * dot.alpha(), m * w0 / constants::hbar, 1e-6 * m * w0 / constants::hbar);
  EXPECT_NO_THROW(DotProfile::from_all(1e-7, dot.alpha(), m, w0));
  EXPECT_THROW(DotProfile::from_all(1e-7, dot.alpha() * 1.01, m, w0), DomainError);
  EXPECT_THROW(DotProfile::from_alpha(1e-7, 0.0), DomainError);
}

TEST(CouplingParams, CenterMustLieOnBeam) {
  EXPECT_THROW(CouplingParams(kDeltaSo, 0.0, 0.0, paper_beam(), DotProfile::from_alpha(kL, 1e8)), DomainError);
  EXPECT_THROW(CouplingParams(kDeltaSo, 0.0, 0.0, paper_beam(), DotProfile::from_alpha(0.0, 1e8)), DomainError);
  EXPECT_THROW(CouplingParams(0.0, 0.0, 0.0, paper_beam(), paper_dot()), DomainError);
  EXPECT_THROW(CouplingParams(kDeltaSo, -1e-6, 0.0, paper_beam(), paper_dot()), DomainError);
}

TEST(ShiftedCenter, ZeroFieldLinearityAndArithmetic) {
  // m* omega0^2 = 1.602176634e-3 N/m, so 1e4 V/m moves the dot by e*1e4/k = 1 pm.
  const double m = 1.602176634e-27;
  const double w0 = 1e12;
  const DotProfile dot = DotProfile::from_oscillator(0.5 * kL, m, w0);
  const BeamMode b = paper_beam();
  EXPECT_EQ(shifted_center(b, dot, 0.0).center, dot.center());
  const double d1 = shifted_center(b, dot, 1e4).center - dot.center();
  const double d2 = shifted_center(b, dot, 2e4).center - dot.center();
  EXPECT_NEAR(d2, 2 * d1, 1e-12 * std::abs(d1) + 1e-24);
  EXPECT_NEAR(d1, 1.0e-12, 1e-21);
  EXPECT_FALSE(shifted_center(b, dot, 1e4).warning.has_value());
}

TEST(ShiftedCenter, LeavingTheTubeWarns) {
  const DotProfile dot = DotProfile::from_oscillator(0.5 * kL, 1.602176634e-27, 1e12);
  const auto s = shifted_center(paper_beam(), dot, 1e12);
  EXPECT_GT(s.center, kL);
  ASSERT_TRUE(s.warning.has_value());
  EXPECT_THROW(shifted_center(paper_beam(), paper_dot(), 1e4), DomainError);
}

TEST(AvgSlope, VanishesAtMidpointWithExactRoot) {
  EXPECT_LT(std::abs(avg_slope(exact_beam(), paper_dot(), 0.5 * kL)), 1e-9 / kL);
}

TEST(AvgSlope, LiteralRootMidpointOffset) {
  // Frozen adaptive-quadrature oracle for beta0 = 4.730, alpha = 40/l.
  EXPECT_NEAR(avg_slope(paper_beam(), paper_dot(), 0.5 * kL) * kL / 0.00011660635023420449, 1.0, 1e-6);
}

TEST(AvgSlope, MatchesBruteForceSimpson) {
  const BeamMode b = paper_beam();
  const DotProfile dot = paper_dot();
  const double c = 0.22 * kL;
  const double ref = oracle::simpson([&](double z) { return mode_slope(z, b) * density_profile(z, dot, c); }, 0.0, kL,
                                     1000000);
  EXPECT_NEAR(ref * kL, 4.863826646468137, 1e-9);  // frozen Simpson oracle
  EXPECT_NEAR(avg_slope(b, dot, c) / ref, 1.0, 1e-8);
}

TEST(AvgSlope, DeltaLimit) {
  const BeamMode b = paper_beam();
  for (double x : {0.15, 0.3, 0.6}) {
    const double c = x * kL;
    const double v = avg_slope(b, paper_dot(4000.0), c);
    EXPECT_NEAR(v / mode_slope(c, b), 1.0, 1e-3);
  }
}

TEST(AvgSlope, DeltaLimitConvergesMonotonically) {
  const BeamMode b = paper_beam();
  const double c = 0.3 * kL;
  double prev = INFINITY;
  for (double a : {20.0, 40.0, 80.0, 160.0, 320.0, 640.0, 1280.0}) {
    const double gap = std::abs(avg_slope(b, paper_dot(a), c) - mode_slope(c, b));
    EXPECT_LT(gap, prev) << "alpha*l = " << a;
    prev = gap;
  }
}

TEST(AvgSlope, IntegrationByPartsAgrees) {
  // <f'> = -int f n' dz once boundary terms vanish (alpha l >= 20).
  const BeamMode b = paper_beam();
  const DotProfile dot = paper_dot();
  for (double x : {0.2, 0.35, 0.62, 0.8}) {
    const double c = x * kL;
    const double a2 = dot.alpha() * dot.alpha();
    const double parts = -oracle::simpson(
        [&](double z) { return mode_shape(z, b) * (-2.0 * a2 * (z - c)) * density_profile(z, dot, c); }, 0.0, kL, 200000);
    EXPECT_NEAR(avg_slope(b, dot, c) / parts, 1.0, 1e-6);
  }
}

TEST(AvgSlope, NarrowPeakIsNotMissed) {
  // A density much narrower than the beam must still be found by the adaptive rule.
  const BeamMode b = paper_beam();
  const double c = 0.123456 * kL;
  const double v = avg_slope(b, paper_dot(40000.0), c);
  EXPECT_NEAR(v / mode_slope(c, b), 1.0, 1e-5);
}

TEST(TailWarning, FlagsBroadDensity) {
  EXPECT_FALSE(tail_clipping_warning(paper_beam(), paper_dot(40.0)).has_value());
  EXPECT_TRUE(tail_clipping_warning(paper_beam(), paper_dot(10.0)).has_value());
}

TEST(Coupling, ZeroAtMidpointAndAntisymmetricWithExactRoot) {
  const CouplingParams p(kDeltaSo, 0.0, constants::bohr_magneton, exact_beam(), paper_dot());
  EXPECT_LT(std::abs(coupling_strength(p, 0.5 * kL)), 1e-9);
  for (double d : {0.01, 0.1, 0.2735, 0.4, 0.49}) {
    const double up = coupling_strength(p, (0.5 + d) * kL);
    const double down = coupling_strength(p, (0.5 - d) * kL);
    EXPECT_NEAR(up, -down, 1e-8 * std::abs(down));
  }
}

TEST(Coupling, LiteralRootMidpointOffset) {
  EXPECT_NEAR(coupling_strength(paper_params(), 0.5 * kL) / 2.3052249664632534e-05, 1.0, 1e-6);
}

TEST(Coupling, LinearInU0AndDeltaSo) {
  const CouplingParams p = paper_params();
  const CouplingParams p2(2 * kDeltaSo, 0.0, 0.0, BeamMode(kL, 2 * kU0), paper_dot());
  const double c = 0.3 * kL;
  EXPECT_DOUBLE_EQ(coupling_strength(p2, c), 4.0 * coupling_strength(p, c));
  const CouplingParams pu(kDeltaSo, 0.0, 0.0, BeamMode(kL, 2 * kU0), paper_dot());
  EXPECT_DOUBLE_EQ(coupling_strength(pu, c), 2.0 * coupling_strength(p, c));
}

TEST(Coupling, DeltaLimitArithmetic) {
  // |f'|max = 4.893/l, then g/h = Delta_so |f'| u0 / (2 sqrt 2 h).
  const double expected = kDeltaSo * 4.8931911173290485 / kL * kU0 / (2 * std::sqrt(2.0)) / 4.135667696e-15 * 1e-6;
  EXPECT_NEAR(expected, 0.967, 1e-3);
  const CouplingParams p = paper_params(40000.0);
  EXPECT_NEAR(std::abs(coupling_strength(p, 0.22415 * kL)), expected, 1e-4 * expected);
}

TEST(Coupling, PaperMaximum) {
  const CouplingParams p = paper_params();
  const double x = oracle::golden_max([&](double x) { return std::abs(coupling_strength(p, x * kL)); }, 0.15, 0.3, 1e-9);
  const double gmax = std::abs(coupling_strength(p, x * kL));
  EXPECT_NEAR(gmax, 0.9618959161804861, 1e-7);  // frozen: Simpson + bounded maximization
  EXPECT_NEAR(gmax, 0.961, 0.02 * 0.961);
}

TEST(SweetSpot, NoIntervalley) {
  const CouplingParams p = paper_params();
  EXPECT_DOUBLE_EQ(sweet_spot_field(p), kDeltaSo * constants::elementary_charge / (2 * constants::bohr_magneton));
  EXPECT_NEAR(sweet_spot_field(p), 3.196057312721, 1e-9);
}

TEST(SweetSpot, RadicandLiteralReducedUnits) {
  // delta_so = 370 ueV, delta_kkp = 10 ueV, mu_orb = 3 mu_B: 1 - 400/(370*2).
  const CouplingParams p(kDeltaSo, 10e-6, 3 * constants::bohr_magneton, paper_beam(), paper_dot());
  const double expect = sweet_spot_field(paper_params()) * std::sqrt(1.0 - 400.0 / 740.0);
  EXPECT_NEAR(sweet_spot_field(p), expect, 1e-12);
}

TEST(SweetSpot, NegativeRadicandRejected) {
  const CouplingParams p(kDeltaSo, 100e-6, 3 * constants::bohr_magneton, paper_beam(), paper_dot());
  EXPECT_THROW(sweet_spot_field(p), DomainError);
  const CouplingParams singular(kDeltaSo, 1e-6, constants::bohr_magneton, paper_beam(), paper_dot());
  EXPECT_THROW(sweet_spot_field(singular), DomainError);
}

}  // namespace
}  // namespace cntspin
