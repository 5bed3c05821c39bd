#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ricciglue/chart_curvature.hpp"
#include "ricciglue/errors.hpp"
#include "ricciglue/profile_metrics.hpp"

using namespace ricciglue;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::VectorXd vec(std::initializer_list<double> xs) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

ChartMetricField product_s2_s2(double h = 1e-3) {
    auto f = sphere_chart_factors(2, 0);
    auto g = sphere_chart_factors(2, 2);
    f.insert(f.end(), g.begin(), g.end());
    Box box{Eigen::VectorXd::Constant(4, kSphereBand), Eigen::VectorXd::Constant(4, kPi - kSphereBand)};
    return make_separable_diagonal_field(4, box, f, h);
}

}  // namespace

TEST(Christoffel, FlatIsZero) {
    const Tensor3 G = christoffel_at(euclidean_field(3), vec({0.1, -0.2, 0.3}));
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) EXPECT_EQ(G(k, i, j), 0.0);
}

TEST(Christoffel, TwoSphereEquatorAndMidLatitude) {
    for (DiffMode mode : {DiffMode::analytic, DiffMode::finite_difference}) {
        const ChartMetricField s2 = round_sphere_field(2).with_mode(mode);
        EXPECT_NEAR(christoffel_at(s2, vec({kPi / 2, 1.0}))(0, 1, 1), 0.0, 1e-9);
        const Tensor3 G = christoffel_at(s2, vec({kPi / 4, 1.0}));
        EXPECT_NEAR(G(0, 1, 1), -0.5, 1e-9);
        EXPECT_NEAR(G(1, 0, 1), 1.0, 1e-9);
        EXPECT_NEAR(G(1, 1, 0), 1.0, 1e-9);
    }
}

TEST(Christoffel, OutsideBoxIsDomainViolation) {
    try {
        christoffel_at(round_sphere_field(2), vec({0.01, 1.0}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DomainViolation);
    }
}

TEST(Christoffel, DegenerateMetricIsSingular) {
    Box box{Eigen::VectorXd::Constant(2, -1.0), Eigen::VectorXd::Constant(2, 1.0)};
    ChartMetricField f(2, box, [](const Eigen::VectorXd& x) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2, 2);
        g(1, 1) = x[0] * x[0];
        return g;
    });
    try {
        christoffel_at(f, vec({0.0, 0.0}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularMetric);
    }
}

TEST(Ricci, FlatIsZero) {
    EXPECT_LT(ricci_at(euclidean_field(4), vec({0.1, 0.2, -0.3, 0.4})).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Ricci, UnitThreeSphereIsTwiceMetric) {
    const ChartMetricField s3 = round_sphere_field(3);
    for (DiffMode mode : {DiffMode::analytic, DiffMode::finite_difference}) {
        const ChartMetricField f = s3.with_mode(mode);
        for (const auto& x : {vec({0.7, 1.1, 2.0}), vec({1.4, 0.4, 0.9}), vec({2.5, 2.2, 0.3})}) {
            const Eigen::MatrixXd ric = ricci_at(f, x);
            EXPECT_LT((ric - 2.0 * f.metric(x)).cwiseAbs().maxCoeff(), 1e-6);
            EXPECT_NEAR(min_ricci_eigenvalue(ric, f.metric(x)), 2.0, 1e-6);
        }
    }
}

TEST(Ricci, ProductOfTwoSpheresIsBlockwise) {
    const Eigen::VectorXd x = vec({0.8, 1.3, 2.1, 0.6});
    const ChartMetricField an = product_s2_s2();
    const ChartMetricField fd = an.with_mode(DiffMode::finite_difference);
    const Eigen::MatrixXd ra = ricci_at(an, x), rf = ricci_at(fd, x);
    EXPECT_LT((ra - an.metric(x)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((rf - ra).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_NEAR(ra(0, 2), 0.0, 1e-14);
}

TEST(Curvature, SymmetriesAndBianchi) {
    const ChartMetricField s3 = round_sphere_field(3);
    for (DiffMode mode : {DiffMode::analytic, DiffMode::finite_difference}) {
        const CurvatureAtPoint c = curvature_at(s3.with_mode(mode), vec({0.9, 1.7, 0.5}));
        for (int k = 0; k < 3; ++k)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) EXPECT_EQ(c.christoffel(k, i, j), c.christoffel(k, j, i));
        EXPECT_LT((c.ricci - c.ricci.transpose()).cwiseAbs().maxCoeff(), 1e-8);
        EXPECT_LT(bianchi_residual(c), mode == DiffMode::analytic ? 1e-6 : 1e-4);
    }
}

TEST(Curvature, SectionalCurvatureSignConvention) {
    const ChartMetricField s2 = round_sphere_field(2);
    const Eigen::VectorXd x = vec({1.0, 1.0});
    const CurvatureAtPoint c = curvature_at(s2, x);
    const Eigen::VectorXd X = vec({1, 0}), Y = vec({0, 1 / std::sin(1.0)});
    EXPECT_NEAR(riemann_form(c, X, Y, Y, X), 1.0, 1e-10);
}

TEST(FiniteDifference, ConvergesAtLeastSecondOrder) {
    // large steps so that truncation, not round-off, dominates
    const Eigen::VectorXd x = vec({1.0, 1.2, 0.8});
    const ChartMetricField s3 = round_sphere_field(3).with_mode(DiffMode::finite_difference);
    const double e1 = (ricci_at(s3.with_fd_step(0.1), x) - 2.0 * s3.metric(x)).cwiseAbs().maxCoeff();
    const double e2 = (ricci_at(s3.with_fd_step(0.05), x) - 2.0 * s3.metric(x)).cwiseAbs().maxCoeff();
    EXPECT_GT(e1 / e2, 3.5);
}

TEST(FiniteDifference, FlatResidualStaysAtRoundOff) {
    const ChartMetricField flat = euclidean_field(3).with_mode(DiffMode::finite_difference);
    EXPECT_LT(ricci_at(flat.with_fd_step(1e-3), vec({0.1, 0.2, 0.3})).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SecondFundamentalForm, HyperplaneIsTotallyGeodesic) {
    const ChartMetricField e3 = euclidean_field(3);
    HypersurfaceFrame fr;
    fr.normal = vec({0, 0, 1});
    fr.tangent_basis = {vec({1, 0, 0}), vec({0, 1, 0})};
    fr.normal_field = [](const Eigen::VectorXd&) { return vec({0, 0, 1}); };
    EXPECT_LT(second_fundamental_form(e3, vec({0.1, 0.2, 0.3}), fr).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SecondFundamentalForm, EuclideanSphereOfRadiusTwo) {
    // spherical chart of R^3: dr^2 + r^2 ds^2_2
    const Interval d{1.0, 3.0};
    const BlockMetricCurve polar({{2, profiles::polynomial({0, 0, 1}, d)}}, d);
    const ChartMetricField f = as_chart_field(polar);
    const Eigen::VectorXd x = vec({2.0, kPi / 2, 1.0});
    HypersurfaceFrame fr;
    fr.normal = vec({1, 0, 0});
    fr.tangent_basis = {vec({0, 0.5, 0}), vec({0, 0, 0.5})};
    fr.normal_field = [](const Eigen::VectorXd&) { return vec({1, 0, 0}); };
    const Eigen::MatrixXd II = second_fundamental_form(f, x, fr);
    EXPECT_NEAR(II(0, 0), 0.5, 1e-8);
    EXPECT_NEAR(II(1, 1), 0.5, 1e-8);
    EXPECT_NEAR(II(0, 1), 0.0, 1e-10);
    EXPECT_NEAR(normal_curvature_profile(polar, 2.0, 0), 0.5, 1e-14);
}

TEST(SecondFundamentalForm, CapBoundaryCircle) {
    const Interval d{0.2, 2.0};
    const BlockMetricCurve cap({{1, square(profiles::sine_warp(1.0, d))}}, d);
    const ChartMetricField f = as_chart_field(cap);
    const double r = kPi / 3;
    HypersurfaceFrame fr;
    fr.normal = vec({1, 0});
    fr.tangent_basis = {vec({0, 1 / std::sin(r)})};
    fr.normal_field = [](const Eigen::VectorXd&) { return vec({1, 0}); };
    EXPECT_NEAR(second_fundamental_form(f, vec({r, 1.0}), fr)(0, 0), 1 / std::tan(r), 1e-8);
}

TEST(SecondFundamentalForm, NonOrthogonalFrameRejected) {
    HypersurfaceFrame fr;
    fr.normal = vec({0, 0, 1});
    fr.tangent_basis = {vec({1, 0, 0.1}), vec({0, 1, 0})};
    fr.normal_field = [](const Eigen::VectorXd&) { return vec({0, 0, 1}); };
    try {
        second_fundamental_form(euclidean_field(3), vec({0, 0, 0}), fr);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NonOrthogonalFrame);
    }
}

TEST(NormalCurvatureProfile, Examples) {
    const Interval d{0.1, 2.0};
    const BlockMetricCurve cap({{2, profiles::cap_coefficient(0.0, 1.0, d)}}, d);
    EXPECT_NEAR(normal_curvature_profile(cap, kPi / 3, 0), 1 / std::sqrt(3.0), 1e-14);
    const BlockMetricCurve cyl({{2, profiles::constant(1.0, d)}}, d);
    EXPECT_EQ(normal_curvature_profile(cyl, 0.5, 0), 0.0);
    const BlockMetricCurve ex({{2, profiles::exponential_coefficient(1.0, 1.0, d)}}, d);
    EXPECT_NEAR(normal_curvature_profile(ex, 1.3, 0), 1.0, 1e-14);
}

TEST(NormalCurvatureProfile, NonPositiveBlockIsDegenerate) {
    const Interval d{-1.0, 1.0};
    const BlockMetricCurve ok({{1, profiles::polynomial({1.0, 0.9}, d)}}, d);
    try {
        normal_curvature_profile(ok, -1.2, 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateBlock);
    }
}
