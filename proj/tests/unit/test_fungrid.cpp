#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "curvfam/errors.hpp"
#include "curvfam/fungrid.hpp"
#include "curvfam/roots.hpp"
#include "oracles.hpp"

using namespace curvfam;
using oracle::kPi;

namespace {

SampledFunction sample(std::size_t n, double (*fn)(double), bool periodic = false) {
  return SampledFunction::sample(UniformGrid(n), fn, periodic);
}

}  // namespace

TEST(UniformGrid, EndpointsAreExact) {
  const UniformGrid g(1024);
  EXPECT_EQ(g.node(0), 0.0);
  EXPECT_EQ(g.node(1023), kTwoPi);
  for (std::size_t j = 1; j < g.size(); ++j) EXPECT_LT(g.node(j - 1), g.node(j));
}

TEST(UniformGrid, RejectsTooFewSamples) {
  EXPECT_THROW(UniformGrid(15), ValidationError);
  EXPECT_NO_THROW(UniformGrid(16));
}

TEST(SampledFunction, RejectsNonFiniteValues) {
  std::vector<double> v(32, 0.0);
  v[7] = std::nan("");
  EXPECT_THROW(SampledFunction(UniformGrid(32), v), ValidationError);
}

TEST(SampledFunction, PeriodicHintRequiresMatchingEndpoints) {
  EXPECT_THROW(sample(64, [](double t) { return t; }, true), ValidationError);
  EXPECT_NO_THROW(sample(64, [](double t) { return std::sin(t); }, true));
}

TEST(Eval, SineAtQuarterPeriod) { EXPECT_NEAR(eval(sample(1024, [](double t) { return std::sin(t); }), kPi / 2), 1.0, 1e-10); }

TEST(Eval, ConstantIsExact) { EXPECT_EQ(eval(SampledFunction::constant(UniformGrid(64), 3.0), 1.2345), 3.0); }

TEST(Eval, SquareOffGrid) {
  const auto f = sample(1024, [](double t) { return t * t; });
  EXPECT_NEAR(eval(f, std::sqrt(2.0)), 2.0, 1e-9);
}

TEST(Eval, ExactAtNodes) {
  const auto f = sample(257, [](double t) { return std::exp(std::sin(3 * t)); });
  for (std::size_t j = 0; j < f.size(); j += 17) EXPECT_EQ(eval(f, f.grid().node(j)), f[j]);
}

TEST(Eval, OutsideIntervalThrows) {
  const auto f = sample(64, [](double t) { return t; });
  EXPECT_THROW(eval(f, -0.01), DomainError);
  EXPECT_THROW(eval(f, kTwoPi + 0.01), DomainError);
}

TEST(Eval, QuinticOrder) {
  // Halving the spacing cuts the worst off-grid error by about 2^6.
  const auto worst = [](std::size_t n) {
    const auto f = sample(n, [](double t) { return std::cos(5 * t); });
    double e = 0.0;
    for (int i = 0; i < 997; ++i) {
      const double t = kTwoPi * (i + 0.5) / 997.0;
      e = std::max(e, std::abs(eval(f, t) - std::cos(5 * t)));
    }
    return e;
  };
  EXPECT_GT(worst(128) / worst(256), 40.0);
}

TEST(Integrate, SineVanishes) { EXPECT_NEAR(integrate(sample(1024, [](double t) { return std::sin(t); })), 0.0, 1e-12); }

TEST(Integrate, ConstantOne) { EXPECT_NEAR(integrate(SampledFunction::constant(UniformGrid(64), 1.0)), kTwoPi, 1e-12); }

TEST(Integrate, ExpCosAgainstDenseTrapezoid) {
  const double ref = oracle::dense_trapezoid([](double t) { return std::exp(std::cos(t)); });
  EXPECT_NEAR(ref, 7.95492652101284, 1e-12);
  EXPECT_NEAR(ref, kTwoPi * std::cyl_bessel_i(0.0, 1.0), 1e-12);
  EXPECT_NEAR(integrate(sample(1024, [](double t) { return std::exp(std::cos(t)); })), ref, 1e-9);
  EXPECT_NEAR(integrate(sample(1024, [](double t) { return std::exp(std::cos(t)); }, true)), ref, 1e-12);
}

TEST(Integrate, NonPeriodicPolynomialIsExact) {
  const auto f = sample(65, [](double t) { return t * t * t * t * t; });
  EXPECT_NEAR(integrate(f), std::pow(kTwoPi, 6) / 6.0, 1e-9 * std::pow(kTwoPi, 6));
}

TEST(Integrate, DoublingChangeBelowEstimate) {
  const auto fn = [](double t) { return std::exp(std::sin(t)) * t; };
  for (std::size_t n : {129u, 257u, 513u}) {
    const auto coarse = integrate_with_estimate(SampledFunction::sample(UniformGrid(n), fn));
    const auto fine = integrate(SampledFunction::sample(UniformGrid(2 * n - 1), fn));
    EXPECT_LE(std::abs(fine - coarse.value), coarse.error_estimate) << n;
  }
}

TEST(Cumulative, CosineGivesSine) {
  const auto F = cumulative(sample(1024, [](double t) { return std::cos(t); }));
  EXPECT_EQ(F[0], 0.0);
  for (std::size_t j = 0; j < F.size(); ++j) EXPECT_NEAR(F[j], std::sin(F.grid().node(j)), 1e-10);
}

TEST(Cumulative, ZeroAndOne) {
  const UniformGrid g(128);
  const auto Z = cumulative(SampledFunction::constant(g, 0.0));
  const auto I = cumulative(SampledFunction::constant(g, 1.0));
  for (std::size_t j = 0; j < g.size(); ++j) {
    EXPECT_EQ(Z[j], 0.0);
    EXPECT_NEAR(I[j], g.node(j), 1e-12);
  }
}

TEST(Cumulative, EndpointMatchesIntegrate) {
  const auto f = sample(300, [](double t) { return std::exp(std::cos(2 * t)) + t; });
  EXPECT_NEAR(cumulative(f).back(), integrate(f), 1e-11);
}

TEST(Derivative, PeriodicSpectral) {
  const auto d = derivative(sample(1024, [](double t) { return std::sin(t); }, true));
  for (std::size_t j = 0; j < d.size(); ++j) EXPECT_NEAR(d[j], std::cos(d.grid().node(j)), 1e-8);
}

TEST(Derivative, NonPeriodicLinear) {
  const auto d = derivative(sample(1024, [](double t) { return t; }));
  for (std::size_t j = 0; j < d.size(); ++j) EXPECT_NEAR(d[j], 1.0, 1e-8);
}

TEST(Derivative, RoundTripOnRandomTrigPolys) {
  std::mt19937_64 rng(11);
  const UniformGrid g(4096);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = oracle::random_trig_poly(rng, 1 + trial % 10);
    const auto f = SampledFunction::sample(g, p);
    const auto back = derivative(cumulative(f));
    double err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(back[j] - f[j]));
    EXPECT_LE(err, 1e-7) << trial;
  }
}

TEST(FdWeights, ReproducesPolynomialDerivatives) {
  const std::vector<double> xs = {0.0, 1.0, 2.0, 3.0, 4.0};
  const auto w = detail::fd_weights(0.0, xs, 2);
  // f = x^2: f(0) = 0, f'(0) = 0, f''(0) = 2
  double d0 = 0, d1 = 0, d2 = 0;
  for (std::size_t q = 0; q < xs.size(); ++q) {
    d0 += w[0][q] * xs[q] * xs[q];
    d1 += w[1][q] * xs[q] * xs[q];
    d2 += w[2][q] * xs[q] * xs[q];
  }
  EXPECT_NEAR(d0, 0.0, 1e-13);
  EXPECT_NEAR(d1, 0.0, 1e-13);
  EXPECT_NEAR(d2, 2.0, 1e-13);
}

TEST(LevelCrossings, SinTwoTAtHalf) {
  const auto c = find_level_crossings(sample(2048, [](double t) { return std::sin(2 * t); }), 0.5);
  const double expected[] = {kPi / 12, 5 * kPi / 12, 13 * kPi / 12, 17 * kPi / 12};
  ASSERT_EQ(c.roots.size(), 4u);
  for (int i = 0; i < 4; ++i) {
    EXPECT_NEAR(c.roots[i].t, expected[i], 1e-9);
    EXPECT_NEAR(std::abs(c.roots[i].derivative), std::sqrt(3.0), 1e-9);
  }
  EXPECT_GT(c.roots[0].derivative, 0.0);
  EXPECT_LT(c.roots[1].derivative, 0.0);
  EXPECT_FALSE(c.boundary_value);
}

TEST(LevelCrossings, ResidualPolished) {
  const auto f = sample(1024, [](double t) { return std::sin(2 * t) + 0.3 * std::cos(5 * t); });
  const auto c = find_level_crossings(f, 0.4);
  for (const auto& r : c.roots) EXPECT_LE(std::abs(eval(f, r.t) - 0.4), 1e-12);
}

TEST(LevelCrossings, ConstantAboveLevelIsEmpty) {
  const auto c = find_level_crossings(SampledFunction::constant(UniformGrid(64), 0.0), 1.0);
  EXPECT_TRUE(c.roots.empty());
}

TEST(LevelCrossings, LinearFunction) {
  const auto c = find_level_crossings(sample(512, [](double t) { return t / kTwoPi; }), 0.5);
  ASSERT_EQ(c.roots.size(), 1u);
  EXPECT_NEAR(c.roots[0].t, kPi, 1e-12);
  EXPECT_NEAR(c.roots[0].derivative, 1.0 / kTwoPi, 1e-12);
}

TEST(LevelCrossings, CriticalLevelThrows) {
  const auto f = sample(1024, [](double t) { return std::sin(2 * t); });
  EXPECT_THROW(find_level_crossings(f, 1.0), CriticalValue);
  EXPECT_THROW(find_level_crossings(SampledFunction::constant(UniformGrid(64), 2.0), 2.0), CriticalValue);
}

TEST(LevelCrossings, BoundaryValueFlagged) {
  const auto c = find_level_crossings(sample(1024, [](double t) { return std::sin(2 * t); }), 0.0);
  EXPECT_TRUE(c.boundary_value);
  EXPECT_EQ(c.roots.size(), 3u);  // pi/2, pi, 3pi/2; the endpoints are excluded
}

TEST(LevelCrossings, CountMatchesSignChangeSweep) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const UniformGrid g(4096);
  int checked = 0;
  for (int trial = 0; checked < 10 && trial < 100; ++trial) {
    const auto p = oracle::random_trig_poly(rng, 1 + trial % 6);
    const auto f = SampledFunction::sample(g, p);
    const auto [lo, hi] = std::minmax_element(f.values().begin(), f.values().end());
    const double a = *lo + u(rng) * (*hi - *lo);
    try {
      const auto c = find_level_crossings(f, a);
      if (c.boundary_value) continue;
      EXPECT_EQ(static_cast<int>(c.roots.size()), oracle::sign_change_count(p, a)) << trial;
      ++checked;
    } catch (const CriticalValue&) {
    }
  }
  EXPECT_EQ(checked, 10);
}

TEST(Brent, FindsCubeRoot) {
  const auto r = roots::brent([](double x) { return x * x * x - 2.0; }, 0.0, 2.0);
  ASSERT_TRUE(r);
  EXPECT_NEAR(r->root, std::cbrt(2.0), 1e-15);
}

TEST(Brent, RejectsUnbracketedInterval) {
  EXPECT_FALSE(roots::brent([](double x) { return x * x + 1.0; }, -1.0, 1.0));
}

TEST(Brent, EndpointRoot) {
  const auto r = roots::brent([](double x) { return x - 1.0; }, 1.0, 3.0);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->root, 1.0);
}
