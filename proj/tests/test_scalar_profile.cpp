#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ricciglue/errors.hpp"
#include "ricciglue/jet.hpp"
#include "ricciglue/scalar_profile.hpp"

using namespace ricciglue;

TEST(Jet, ProductAndQuotientMatchTaylorSeries) {
    const Jet x = Jet::variable(0.3);
    const Derivs d = (x * x * x / (Jet(1.0) + x)).derivs();
    // f = x^3 / (1 + x)
    const double f = 0.027 / 1.3;
    const double f1 = (3 * 0.09 * 1.3 - 0.027) / (1.3 * 1.3);
    EXPECT_NEAR(d.v, f, 1e-15);
    EXPECT_NEAR(d.d1, f1, 1e-14);
}

TEST(Jet, ElementaryFunctionsCarryThreeDerivatives) {
    const double x0 = 0.7;
    const Derivs s = sin(Jet::variable(x0)).derivs();
    EXPECT_NEAR(s.d1, std::cos(x0), 1e-15);
    EXPECT_NEAR(s.d2, -std::sin(x0), 1e-15);
    EXPECT_NEAR(s.d3, -std::cos(x0), 1e-15);
    const Derivs e = exp(2.0 * Jet::variable(x0)).derivs();
    EXPECT_NEAR(e.d3, 8 * std::exp(2 * x0), 1e-12);
    const Derivs r = sqrt(Jet::variable(4.0)).derivs();
    EXPECT_NEAR(r.d1, 0.25, 1e-15);
    EXPECT_NEAR(r.d2, -1.0 / 32, 1e-15);
    EXPECT_NEAR(r.d3, 3.0 / 256, 1e-15);
}

TEST(Jet, ComposeIsChainRule) {
    const Jet inner = sin(Jet::variable(0.4));
    const Derivs outer = exp(Jet::variable(inner.c0)).derivs();
    const Derivs direct = exp(sin(Jet::variable(0.4))).derivs();
    const Derivs chained = compose(outer, inner).derivs();
    EXPECT_NEAR(chained.d1, direct.d1, 1e-14);
    EXPECT_NEAR(chained.d2, direct.d2, 1e-14);
    EXPECT_NEAR(chained.d3, direct.d3, 1e-13);
}

TEST(ScalarProfile, EmptyFunctionOrDomainRejected) {
    EXPECT_THROW(ScalarProfile({}, {0, 1}), Error);
    EXPECT_THROW(ScalarProfile([](double) { return Derivs{}; }, {1, 1}), Error);
}

TEST(ScalarProfile, FactoriesHaveConsistentDerivatives) {
    const Interval d{0.0, 1.5};
    for (const ScalarProfile& p : {profiles::sine_warp(2.0, d), profiles::identity(d), profiles::constant(3.0, d),
                                   profiles::polynomial({1, -2, 0.5, 0.25}, d),
                                   profiles::cap_coefficient(std::numbers::pi / 3, 1.0, d),
                                   profiles::exponential_coefficient(0.5, 1.5, d)})
        EXPECT_LT(derivative_consistency_error(p), 1e-6) << p.spec().family;
}

TEST(ScalarProfile, SineWarpIsOddAtZero) {
    const ScalarProfile a = profiles::sine_warp(2.0, {0.0, 1.5});
    EXPECT_EQ(a.parity_left(), Parity::odd);
    EXPECT_LT(parity_residual(a, false), 1e-10);
    EXPECT_NEAR(a.d2(0.0), 0.0, 1e-12);
    EXPECT_NEAR(a.d1(0.0), 1.0, 1e-15);
}

TEST(ScalarProfile, WrongParityIsDetected) {
    const ScalarProfile p([](double x) { return Derivs{x + x * x, 1 + 2 * x, 2, 0}; }, {0, 1}, Parity::odd);
    EXPECT_GT(parity_residual(p, false), 1e-3);
    const ScalarProfile even = profiles::polynomial({1, 0, 3}, {0, 1});
    EXPECT_DOUBLE_EQ(parity_residual(even, false), 0.0);
}

TEST(ScalarProfile, ComposeAndSquare) {
    const Interval d{0.0, 1.0};
    const ScalarProfile c = compose(profiles::sine_warp(1.0, d), profiles::polynomial({0, 2}, d));
    EXPECT_NEAR(c.value(0.3), std::sin(0.6), 1e-15);
    EXPECT_NEAR(c.d2(0.3), -4 * std::sin(0.6), 1e-14);
    const ScalarProfile s = square(profiles::sine_warp(1.0, d));
    EXPECT_NEAR(s.d1(0.5), std::sin(1.0), 1e-15);
    EXPECT_LT(derivative_consistency_error(c), 1e-6);
}

TEST(ScalarProfile, BrokenDerivativeFailsConsistency) {
    const ScalarProfile p([](double x) { return Derivs{x * x, 2 * x, 2.5, 0}; }, {0, 1});
    EXPECT_GT(derivative_consistency_error(p), 0.1);
}
