#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "curvfam/errors.hpp"
#include "curvfam/smoothcurve.hpp"
#include "oracles.hpp"

using namespace curvfam;
using oracle::cplx;
using oracle::kPi;

namespace {

const UniformGrid kGrid(4096);

template <class F>
SampledFunction on_grid(F&& fn, bool periodic = false) {
  return SampledFunction::sample(kGrid, std::forward<F>(fn), periodic);
}

const auto kIdentity = [](double t) { return t; };
const auto kSin2 = [](double t) { return std::sin(2 * t); };

}  // namespace

TEST(TurningAngle, ConstantCurvature) {
  const auto th = turning_angle(SampledFunction::constant(kGrid, 1.0));
  for (std::size_t j = 0; j < th.size(); j += 101) EXPECT_NEAR(th[j], kGrid.node(j), 1e-12);
  const auto zero = turning_angle(SampledFunction::constant(kGrid, 0.0));
  EXPECT_EQ(zero.sup_norm(), 0.0);
}

TEST(TurningAngle, CosineCurvature) {
  const auto th = turning_angle(on_grid([](double t) { return std::cos(t); }));
  for (std::size_t j = 0; j < th.size(); j += 101) EXPECT_NEAR(th[j], std::sin(kGrid.node(j)), 1e-10);
}

TEST(CurveFromAngle, CircleCenteredAtI) {
  const auto c = curve_from_angle(on_grid(kIdentity));
  EXPECT_EQ(c.points[0], cplx(0.0, 0.0));
  for (std::size_t j = 0; j < c.points.size(); j += 97) {
    const double t = kGrid.node(j);
    EXPECT_NEAR(c.points[j].real(), std::sin(t), 1e-10);
    EXPECT_NEAR(c.points[j].imag(), 1.0 - std::cos(t), 1e-10);
  }
}

TEST(CurveFromAngle, StraightSegment) {
  const auto c = curve_from_angle(SampledFunction::constant(kGrid, 0.0));
  EXPECT_NEAR(c.endpoint().real(), kTwoPi, 1e-12);
  EXPECT_NEAR(c.endpoint().imag(), 0.0, 1e-15);
}

TEST(CurveFromAngle, ChordsBoundedBySpacing) {
  const auto c = curve_from_angle(on_grid([](double t) { return t + 0.3 * std::sin(2 * t); }));
  for (std::size_t j = 1; j < c.points.size(); ++j) {
    EXPECT_LE(std::abs(c.points[j] - c.points[j - 1]), 1.5 * kGrid.spacing());
  }
  EXPECT_LE(std::abs(c.endpoint()), 1e-9);
}

TEST(ClosureDefect, ClosedForms) {
  EXPECT_LE(closure_defect(on_grid(kIdentity)), 1e-12);
  EXPECT_NEAR(closure_defect(SampledFunction::constant(kGrid, 0.0)), kTwoPi, 1e-12);
  EXPECT_NEAR(closure_defect(on_grid([](double t) { return t / 2; })), 4.0, 1e-10);
}

TEST(FOfLambda, JacobiAngerOracle) {
  const auto theta = on_grid(kIdentity);
  const auto phi = on_grid([](double t) { return std::sin(t); });
  for (double lambda : {-3.0, -0.7, 0.0, 0.4, 1.3, 2.9, 5.0}) {
    const auto F = f_of_lambda(theta, phi, lambda);
    EXPECT_NEAR(F.real(), oracle::shifted_circle_integral(lambda), 1e-10) << lambda;
    EXPECT_NEAR(F.imag(), 0.0, 1e-10) << lambda;
  }
}

TEST(FOfLambda, SinTwoTFamilyVanishes) {
  EXPECT_LE(std::abs(f_of_lambda(on_grid(kIdentity), on_grid(kSin2), 1.7)), 1e-9);
}

TEST(FOfLambda, ZeroPhiIsLambdaIndependent) {
  const auto theta = on_grid([](double t) { return 0.4 * t + std::cos(t); });
  const auto phi = SampledFunction::constant(kGrid, 0.0);
  EXPECT_EQ(f_of_lambda(theta, phi, 3.3), f_of_lambda(theta, phi, 0.0));
}

TEST(FOfLambda, LinearPhi) {
  EXPECT_LE(std::abs(f_of_lambda(SampledFunction::constant(kGrid, 0.0), on_grid(kIdentity), 1.0)), 1e-10);
}

TEST(FOfLambda, RejectsMismatchedGrids) {
  EXPECT_THROW(f_of_lambda(on_grid(kIdentity), SampledFunction::constant(UniformGrid(64), 0.0), 1.0),
               ValidationError);
}

TEST(Moment, SinTwoTMomentsVanish) {
  const auto theta = on_grid(kIdentity);
  const auto phi = on_grid(kSin2);
  for (int n = 0; n <= 12; ++n) EXPECT_LE(std::abs(moment(theta, phi, n)), 1e-9) << n;
}

TEST(Moment, ScalarSecondMomentIsPi) {
  const auto m = moment(SampledFunction::constant(kGrid, 0.0), on_grid([](double t) { return std::sin(t); }), 2);
  EXPECT_NEAR(m.real(), kPi, 1e-10);
  EXPECT_NEAR(m.imag(), 0.0, 1e-12);
}

TEST(Moment, ZerothIsClosureIntegral) {
  const auto theta = on_grid([](double t) { return t / 2; });
  EXPECT_NEAR(std::abs(moment(theta, on_grid(kSin2), 0)), closure_defect(theta), 1e-14);
}

TEST(Moment, LargeScaleMatchesDenseQuadrature) {
  // phi = 40 cos t: phi^n reaches 1e24 at n = 15; rescaling keeps full relative accuracy.
  const auto theta = on_grid([](double t) { return 0.3 * t; });
  const auto phi = on_grid([](double t) { return 40.0 * std::cos(t); });
  const int n = 15;
  const cplx ref = oracle::dense_simpson(
      [&](double t) { return std::polar(1.0, 0.3 * t) * std::pow(40.0 * std::cos(t), n); }, 0.0, kTwoPi);
  const cplx m = moment(theta, phi, n);
  EXPECT_LE(std::abs(m - ref), 1e-9 * std::abs(ref));
}

TEST(Moment, OrderAboveMaximumRejected) {
  EXPECT_THROW(moment(on_grid(kIdentity), on_grid(kSin2), 25), PreconditionError);
  EXPECT_NO_THROW(moment(on_grid(kIdentity), on_grid(kSin2), 30, MomentOptions{30}));
}

TEST(SeriesCoefficient, Examples) {
  const auto theta0 = SampledFunction::constant(kGrid, 0.0);
  const auto sin1 = on_grid([](double t) { return std::sin(t); });
  const auto c2 = series_coefficient(theta0, sin1, 2);
  EXPECT_NEAR(c2.real(), -kPi / 2, 1e-9);
  EXPECT_NEAR(c2.imag(), 0.0, 1e-9);
  EXPECT_LE(std::abs(series_coefficient(on_grid(kIdentity), on_grid(kSin2), 3)), 1e-9);
  const auto th = on_grid([](double t) { return t / 2; });
  EXPECT_NEAR(std::abs(series_coefficient(th, sin1, 0) - f_of_lambda(th, sin1, 0.0)), 0.0, 1e-15);
}

TEST(SeriesCoefficient, TaylorEnvelopeOnBesselFamily) {
  // theta = 0, phi = sin t: F(lambda) = 2 pi J_0(lambda).
  const auto theta = SampledFunction::constant(kGrid, 0.0);
  const auto phi = on_grid([](double t) { return std::sin(t); });
  for (int N : {4, 8, 10}) {
    for (double lambda = -1.0; lambda <= 1.0; lambda += 0.25) {
      cplx partial{};
      for (int n = 0; n <= N; ++n) partial += series_coefficient(theta, phi, n) * std::pow(lambda, n);
      const double exact = kTwoPi * oracle::bessel_j(0, lambda);
      const double envelope = 2.0 * std::pow(std::abs(lambda), N + 1) / std::tgamma(N + 2.0) * kTwoPi;
      EXPECT_LE(std::abs(partial - exact), envelope + 1e-12) << N << ' ' << lambda;
    }
  }
}

TEST(ComposedMoment, IdentityAndConstant) {
  const auto theta = on_grid([](double t) { return 0.7 * t; });
  const auto phi = on_grid([](double t) { return std::cos(t) + 0.2; });
  for (int n = 0; n <= 4; ++n) {
    EXPECT_LE(std::abs(composed_moment(theta, phi, Generator::identity(), n) - moment(theta, phi, n)), 1e-13);
  }
  const cplx closure = moment(theta, phi, 0);
  EXPECT_LE(std::abs(composed_moment(theta, phi, Generator::constant(2.5), 1) - 2.5 * closure), 1e-13);
}

TEST(ComposedMoment, ExpPlusTwoXOnSinTwoT) {
  const auto g = Generator::parse("exp+2x");
  EXPECT_LE(std::abs(composed_moment(on_grid(kIdentity), on_grid(kSin2), g, 1)), 1e-8);
  const cplx dense = oracle::dense_trapezoid(
      [](double t) { return std::polar(1.0, t) * (std::exp(std::sin(2 * t)) + 2 * std::sin(2 * t)); });
  EXPECT_LE(std::abs(dense), 1e-8);
}

TEST(ComposedMoment, GeneratorOutsideDomainThrows) {
  const auto table = Generator::table({-1.0, 0.0, 1.0}, {1.0, 0.0, 1.0});
  EXPECT_THROW(composed_moment(on_grid(kIdentity), on_grid([](double t) { return 2 * std::sin(t); }), table, 1),
               DomainError);
}

TEST(LevelSetCondition, ClosedFormRoots) {
  const auto rep = level_set_condition(on_grid(kIdentity), on_grid(kSin2), 0.5);
  ASSERT_EQ(rep.roots.size(), 4u);
  const double expected[] = {kPi / 12, 5 * kPi / 12, 13 * kPi / 12, 17 * kPi / 12};
  cplx oracle_sum{};
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(rep.roots[i].t, expected[i], 1e-9);
    EXPECT_NEAR(rep.roots[i].theta, expected[i], 1e-9);
    EXPECT_NEAR(rep.roots[i].abs_phi_prime, std::sqrt(3.0), 1e-9);
    oracle_sum += std::polar(1.0, expected[i]) / std::sqrt(3.0);
  }
  EXPECT_LE(std::abs(oracle_sum), 1e-15);
  EXPECT_LE(std::abs(rep.weighted_sum), 1e-9);
  EXPECT_TRUE(rep.boundary_excluded);
  const auto partial = rep.partial_sums();
  EXPECT_LE(std::abs(partial.back() - rep.weighted_sum), 1e-15);
}

TEST(LevelSetCondition, MonotonePhiSingleRoot) {
  const auto rep = level_set_condition(on_grid(kIdentity), on_grid(kIdentity), 2.0);
  ASSERT_EQ(rep.roots.size(), 1u);
  EXPECT_NEAR(std::abs(rep.weighted_sum), 1.0, 1e-10);
}

TEST(LevelSetCondition, LevelAboveRange) {
  const auto rep = level_set_condition(on_grid(kIdentity), on_grid(kSin2), 2.0);
  EXPECT_TRUE(rep.roots.empty());
  EXPECT_EQ(rep.weighted_sum, cplx{});
}

TEST(LevelSetCondition, BoundaryLevelFlagged) {
  EXPECT_FALSE(level_set_condition(on_grid(kIdentity), on_grid(kSin2), 0.0).boundary_excluded);
}

TEST(FamilyScan, CircleFamilyPasses) {
  const auto r = family_scan(SampledFunction::constant(kGrid, 1.0),
                             on_grid([](double t) { return 2 * std::cos(2 * t); }), default_lambda_grid(), 1e-9);
  EXPECT_EQ(r.defects.size(), 21u);
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.max_defect, 1e-9);
}

TEST(FamilyScan, UnitPairFails) {
  const auto r = family_scan(SampledFunction::constant(kGrid, 1.0), SampledFunction::constant(kGrid, 1.0), {0.5},
                             1e-9);
  EXPECT_NEAR(r.defects[0], 4.0 / 3.0, 1e-10);
  EXPECT_FALSE(r.pass);
}

TEST(FamilyScan, ZeroDirectionRepeatsClosureDefect) {
  const auto k = on_grid([](double t) { return 0.5 + std::cos(t); });
  const auto r = family_scan(k, SampledFunction::constant(kGrid, 0.0), {-2.0, 0.0, 3.0}, 1e-9);
  for (double d : r.defects) EXPECT_NEAR(d, closure_defect(turning_angle(k)), 1e-15);
}

TEST(FamilyScan, EmptyLambdaListRejected) {
  EXPECT_THROW(family_scan(SampledFunction::constant(kGrid, 1.0), SampledFunction::constant(kGrid, 0.0), {}, 1e-9),
               PreconditionError);
}

TEST(BoundaryCheck, CircleIsEven) {
  const auto rep = boundary_check(on_grid(kIdentity), on_grid(kSin2), 3, 1e-6);
  EXPECT_EQ(rep.branch, BoundaryBranch::Even);
  EXPECT_TRUE(rep.phi_endpoint_match);
  ASSERT_EQ(rep.derivative_residuals.size(), 3u);
  for (double r : rep.derivative_residuals) EXPECT_LT(r, 1e-5);
}

TEST(BoundaryCheck, HalfTurnWithSinTwoT) {
  // theta gap pi puts the angle in the odd class; sin(2t) has endpoint
  // derivatives 2, 0, -8 at both ends, so the (-1)^k signed match fails at k = 1.
  const auto rep = boundary_check(on_grid([](double t) { return t / 2; }), on_grid(kSin2), 3, 1e-6);
  EXPECT_EQ(rep.branch, BoundaryBranch::Violation);
  EXPECT_NEAR(rep.theta_gap, kPi, 1e-12);
  EXPECT_GT(rep.odd_max_residual, 1.0);
}

TEST(BoundaryCheck, SyntheticOddInput) {
  // theta(t) = pi/2 - (pi/2) P((pi - t)/pi) with P odd, P(+-1) = +-1: theta(0) = 0,
  // theta(2pi) = pi and theta' even about pi. phi = sin(t/2) is odd about pi.
  const auto P = [](double x) {
    // normalized int_0^x (1 - u^2)^4 du
    const double x2 = x * x;
    const double v = x * (1 - x2 * (4.0 / 3 - x2 * (6.0 / 5 - x2 * (4.0 / 7 - x2 / 9))));
    return v * 315.0 / 128.0;
  };
  const auto theta = on_grid([&](double t) { return kPi / 2 - kPi / 2 * P((kPi - t) / kPi); });
  const auto phi = on_grid([](double t) { return std::sin(t / 2); });
  const auto rep = boundary_check(theta, phi, 3, 1e-6);
  EXPECT_EQ(rep.branch, BoundaryBranch::Odd);
  EXPECT_NEAR(rep.theta_gap, kPi, 1e-12);
}

TEST(BoundaryCheck, ThirdTurnIsViolation) {
  const auto rep = boundary_check(on_grid([](double t) { return t / 6; }), on_grid(kSin2), 3, 1e-6);
  EXPECT_EQ(rep.branch, BoundaryBranch::Violation);
}

TEST(BoundaryCheck, CriticalStartThrows) {
  EXPECT_THROW(boundary_check(on_grid(kIdentity), on_grid([](double t) { return std::cos(2 * t); }), 3, 1e-6),
               CriticalValue);
}

TEST(Properties, RigidRotationScalesMoments) {
  const auto theta = on_grid([](double t) { return t + 0.2 * std::sin(3 * t); });
  const auto rotated = on_grid([](double t) { return t + 0.2 * std::sin(3 * t) + 0.9; });
  const auto phi = on_grid([](double t) { return std::cos(t) * std::sin(2 * t); });
  const cplx unit = std::polar(1.0, 0.9);
  for (int n = 0; n <= 6; ++n) EXPECT_LE(std::abs(moment(rotated, phi, n) - unit * moment(theta, phi, n)), 1e-12);
  for (double lambda : {-1.0, 0.5, 2.0}) {
    EXPECT_NEAR(std::abs(f_of_lambda(rotated, phi, lambda)), std::abs(f_of_lambda(theta, phi, lambda)), 1e-12);
  }
}

TEST(Properties, ScalarFamiliesHavePositiveSecondMoment) {
  const auto theta = SampledFunction::constant(kGrid, 0.0);
  for (double c : {0.1, 1.0, 3.0}) {
    const auto phi = on_grid([c](double t) { return c * (std::cos(t) + 0.5 * std::sin(3 * t)); });
    const double l2 = oracle::dense_trapezoid([c](double t) {
      const double v = c * (std::cos(t) + 0.5 * std::sin(3 * t));
      return v * v;
    });
    const auto m = moment(theta, phi, 2);
    EXPECT_GT(m.real(), 0.0);
    EXPECT_NEAR(m.real(), l2, 1e-10 * l2);
  }
}
