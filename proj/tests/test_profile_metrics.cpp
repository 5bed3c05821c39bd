#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ricciglue/block_metric.hpp"
#include "ricciglue/errors.hpp"
#include "ricciglue/profile_metrics.hpp"

using namespace ricciglue;

namespace {

constexpr double kPi = std::numbers::pi;

DoublyWarpedMetric product(ScalarProfile alpha, ScalarProfile beta, int m, int n, double s1, double t1) {
    DoublyWarpedMetric g;
    g.m = m;
    g.n = n;
    g.s_range = {0.0, s1};
    g.t_range = {0.0, t1};
    g.alpha = std::move(alpha);
    g.beta = std::move(beta);
    g.delta = profiles::constant(1.0, g.t_range);
    g.gamma = profiles::constant(1.0, g.s_range);
    return g;
}

DoublyWarpedMetric sine_product(double a, int m, int n, double s1) {
    const Interval d{0.0, s1};
    return product(profiles::sine_warp(a, d), profiles::sine_warp(a, d), m, n, s1, s1);
}

Eigen::VectorXd point(int dim, double s, double t) {
    Eigen::VectorXd x = Eigen::VectorXd::Constant(dim, 1.2);
    x[0] = s;
    x[1] = t;
    return x;
}

}  // namespace

TEST(RotsymRicci, UnitThreeSphere) {
    const auto r = ricci_closed_form_rotsym(profiles::sine_warp(1.0, {0, kPi}), 3, kPi / 4);
    EXPECT_NEAR(r.radial, 2.0, 1e-14);
    EXPECT_NEAR(r.spherical, 2.0, 1e-14);
}

TEST(RotsymRicci, EuclideanIsFlat) {
    for (int N : {2, 3, 5}) {
        const auto r = ricci_closed_form_rotsym(profiles::identity({0, 2}), N, 0.7);
        EXPECT_EQ(r.radial, 0.0);
        EXPECT_NEAR(r.spherical, 0.0, 1e-15);
    }
}

TEST(RotsymRicci, SphereOfRadiusTwoInFourDimensions) {
    const auto r = ricci_closed_form_rotsym(profiles::sine_warp(2.0, {0, 3}), 4, 1.0);
    EXPECT_NEAR(r.radial, 0.75, 1e-14);
    EXPECT_NEAR(r.spherical, 0.75, 1e-14);
}

TEST(RotsymRicci, NonPositiveWarpIsDegenerate) {
    try {
        ricci_closed_form_rotsym(profiles::sine_warp(1.0, {0, 4}), 3, 3.5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateProfile);
    }
}

TEST(ProductRicci, TwoUnitThreeSpheres) {
    const auto r = ricci_closed_form_product(sine_product(1.0, 3, 3, 3.0), kPi / 4, kPi / 4);
    EXPECT_NEAR(r.s, 2.0, 1e-14);
    EXPECT_NEAR(r.sphere_a, 2.0, 1e-14);
    EXPECT_NEAR(r.t, 2.0, 1e-14);
    EXPECT_NEAR(r.sphere_b, 2.0, 1e-14);
}

TEST(ProductRicci, FlatProduct) {
    const Interval d{0.0, 1.0};
    const auto r = ricci_closed_form_product(product(profiles::identity(d), profiles::identity(d), 3, 4, 1, 1), 0.3, 0.6);
    EXPECT_NEAR(r.s, 0.0, 1e-15);
    EXPECT_NEAR(r.sphere_a, 0.0, 1e-15);
    EXPECT_NEAR(r.t, 0.0, 1e-15);
    EXPECT_NEAR(r.sphere_b, 0.0, 1e-15);
}

TEST(ProductRicci, BlocksReduceToRotsym) {
    const Interval d{0.0, 1.5};
    const auto r = ricci_closed_form_product(product(profiles::sine_warp(2.0, d), profiles::identity(d), 4, 3, 1.5, 1.5),
                                             1.0, 0.8);
    EXPECT_NEAR(r.s, 0.75, 1e-14);
    EXPECT_NEAR(r.sphere_a, 0.75, 1e-14);
    EXPECT_NEAR(r.t, 0.0, 1e-15);
}

TEST(ProductRicci, BumpedDeltaIsNotAProduct) {
    DoublyWarpedMetric g = sine_product(2.0, 3, 3, 1.5);
    g.delta = profiles::polynomial({1.0, 0.0, 0.1}, g.t_range);
    try {
        ricci_closed_form_product(g, 0.5, 0.5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotAProduct);
    }
}

TEST(ChartField, DoublyWarpedIsDiagonalOfDimensionMPlusN) {
    const ChartMetricField f = as_chart_field(sine_product(1.0, 3, 3, 1.5));
    ASSERT_EQ(f.dim(), 6);
    const Eigen::MatrixXd g = f.metric(point(6, 0.5, 0.7));
    EXPECT_EQ(g.rows(), 6);
    EXPECT_EQ((g - Eigen::MatrixXd(g.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_NEAR(g(2, 2), std::sin(0.5) * std::sin(0.5), 1e-15);
}

TEST(ChartField, CapCurveIsThreeDimensional) {
    const Interval d{0.1, 3.0};
    const BlockMetricCurve cap({{2, square(profiles::sine_warp(1.0, d))}}, d);
    EXPECT_EQ(as_chart_field(cap).dim(), 3);
}

TEST(ChartField, BlockCurveAgreesWithClosedForm) {
    const Interval d{0.1, 1.5};
    const BlockMetricCurve curve({{1, profiles::polynomial({1.0, 0.3, 0.2}, d)},
                                  {2, profiles::exponential_coefficient(1.0, -0.5, d)}},
                                 d);
    const ChartMetricField f = as_chart_field(curve);
    for (DiffMode mode : {DiffMode::analytic, DiffMode::finite_difference}) {
        const ChartMetricField fm = f.with_mode(mode);
        for (double t : {0.3, 0.8, 1.2}) {
            Eigen::VectorXd x = Eigen::VectorXd::Constant(4, 1.0);
            x[0] = t;
            const Eigen::MatrixXd exact = closed_form_ricci_matrix(curve, x);
            EXPECT_LT((ricci_at(fm, x) - exact).cwiseAbs().maxCoeff() / std::max(1.0, exact.cwiseAbs().maxCoeff()), 1e-6);
        }
    }
}

TEST(ChartField, DoublyWarpedAgreesWithClosedForm) {
    const DoublyWarpedMetric g = sine_product(2.0, 3, 3, 1.4);
    const ChartMetricField f = as_chart_field(g);
    const Eigen::VectorXd x = point(6, 0.6, 0.9);
    const Eigen::MatrixXd exact = closed_form_ricci_matrix(g, x);
    for (DiffMode mode : {DiffMode::analytic, DiffMode::finite_difference})
        EXPECT_LT((ricci_at(f.with_mode(mode), x) - exact).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(ChartField, BumpedMetricJetMatchesFiniteDifferences) {
    DoublyWarpedMetric g = sine_product(2.0, 3, 3, 1.4);
    g.delta = profiles::polynomial({1.0, 0.0, 0.05}, g.t_range);
    g.gamma = profiles::polynomial({1.0, 0.0, 0.08}, g.s_range);
    const ChartMetricField f = as_chart_field(g);
    const Eigen::VectorXd x = point(6, 0.6, 0.9);
    const Eigen::MatrixXd an = ricci_at(f, x);
    EXPECT_LT((ricci_at(f.with_mode(DiffMode::finite_difference), x) - an).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_GT(std::abs(an(0, 1)), 1e-6);
}

TEST(MinRicciOnGrid, RoundThreeSphere) {
    const ChartMetricField s3 = round_sphere_field(3);
    const GridMin m = min_ricci_on_grid(s3, interior_grid(s3, {0, 1, 2}, 5, 0.2));
    EXPECT_NEAR(m.value, 2.0, 1e-6);
}

TEST(MinRicciOnGrid, FlatProduct) {
    const Interval d{0.0, 1.0};
    const ChartMetricField f = as_chart_field(product(profiles::identity(d), profiles::identity(d), 3, 3, 1, 1));
    const GridMin m = min_ricci_on_grid(f, interior_grid(f, {0, 1}, 6, 0.1));
    EXPECT_NEAR(m.value, 0.0, 1e-6);
}

TEST(MinRicciOnGrid, SineProductMatchesClosedFormAtArgmin) {
    DoublyWarpedMetric g = sine_product(2.0, 3, 3, 1.0);
    const ChartMetricField f = as_chart_field(g);
    const LatticeGrid grid = interior_grid(f, {0, 1}, 10, 0.1);
    const GridMin m = min_ricci_on_grid(f, grid);
    EXPECT_GT(m.value, 0.0);
    double brute = INFINITY;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Eigen::VectorXd x = grid.point(i);
        const auto r = ricci_closed_form_product(g, x[0], x[1]);
        brute = std::min({brute, r.s, r.sphere_a, r.t, r.sphere_b});
    }
    EXPECT_NEAR(m.value, brute, 1e-6);
    const auto at = ricci_closed_form_product(g, m.argmin[0], m.argmin[1]);
    EXPECT_NEAR(m.value, std::min({at.s, at.sphere_a, at.t, at.sphere_b}), 1e-6);
}

TEST(MinRicciOnGrid, ConcaveWarpsGivePositiveRicci) {
    for (double a : {0.8, 1.0, 2.0, 5.0}) {
        const double s1 = 0.9 * a * kPi / 2;
        const ChartMetricField f = as_chart_field(sine_product(a, 3, 2, s1));
        EXPECT_GT(min_ricci_on_grid(f, interior_grid(f, {0, 1}, 8, 0.05)).value, 0.0) << a;
    }
}

TEST(WarpCheck, SineWarpPassesAndConvexWarpFails) {
    EXPECT_TRUE(check_warps(sine_product(2.0, 3, 3, 1.5)).ok);
    EXPECT_NO_THROW(validate(sine_product(2.0, 3, 3, 1.5)));
    const Interval d{0.0, 1.0};
    const DoublyWarpedMetric convex =
        product(profiles::polynomial({0, 1, 0, 0.2}, d), profiles::sine_warp(1.0, d), 3, 3, 1, 1);
    EXPECT_FALSE(check_warps(convex).ok);
    try {
        validate(convex);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
    }
}

TEST(WarpCheck, OddWarpHasVanishingEvenDerivativesAtZero) {
    const ScalarProfile a = profiles::sine_warp(1.5, {0, 1});
    EXPECT_LT(std::abs(a.value(0.0)), 1e-8);
    EXPECT_LT(std::abs(a.d2(0.0)), 1e-8);
}
