#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "ricciglue/errors.hpp"
#include "ricciglue/perelman_glue.hpp"
#include "ricciglue/profile_metrics.hpp"

namespace ricciglue::app {

namespace {

constexpr double kPi = std::numbers::pi;

double matrix_rel_error(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
    return (got - want).cwiseAbs().maxCoeff() / std::max(want.cwiseAbs().maxCoeff(), 1.0);
}

template <class Exact>
double grid_error(const ChartMetricField& field, const LatticeGrid& grid, Exact exact) {
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Eigen::VectorXd x = grid.point(i);
        worst = std::max(worst, matrix_rel_error(ricci_at(field, x), exact(x)));
    }
    return worst;
}

ChartMetricField fd_mode(const ChartMetricField& f, double h) {
    return f.with_mode(DiffMode::finite_difference).with_fd_step(h);
}

}  // namespace

SuiteResult oracle_suite(double fd_step, int grid) {
    SuiteResult r{"oracle agreement", false, 0.0, 1e-6, {}};
    try {
        const ChartMetricField flat = fd_mode(euclidean_field(3), fd_step);
        const double e_flat = grid_error(flat, interior_grid(flat, {0, 1}, grid, 0.1),
                                         [](const Eigen::VectorXd&) { return Eigen::MatrixXd::Zero(3, 3); });

        const ChartMetricField s3 = fd_mode(round_sphere_field(3), fd_step);
        const double e_s3 = grid_error(s3, interior_grid(s3, {0, 1}, grid, 0.2),
                                       [&](const Eigen::VectorXd& x) { return Eigen::MatrixXd(2.0 * s3.metric(x)); });

        const Interval dom{0.2, 2.0};
        const BlockMetricCurve warp({{3, square(profiles::sine_warp(2.0, dom))}}, dom);
        const ChartMetricField wf = fd_mode(as_chart_field(warp), fd_step);
        const double e_warp = grid_error(wf, interior_grid(wf, {0, 1}, grid, 0.2),
                                         [&](const Eigen::VectorXd& x) { return closed_form_ricci_matrix(warp, x); });

        const Interval S{0.0, 1.5};
        const DoublyWarpedMetric h{3, 3, profiles::sine_warp(2.0, S), profiles::sine_warp(2.0, S),
                                   profiles::constant(1.0, S), profiles::constant(1.0, S), S, S};
        const ChartMetricField hf = fd_mode(as_chart_field(h), fd_step);
        LatticeGrid hg = interior_grid(hf, {0, 1}, grid, 0.2);
        hg.lo[0] = hg.lo[1] = 0.1;
        hg.hi[0] = hg.hi[1] = 1.4;
        const double e_h = grid_error(hf, hg, [&](const Eigen::VectorXd& x) { return closed_form_ricci_matrix(h, x); });

        r.value = std::max({e_flat, e_s3, e_warp, e_h});
        std::ostringstream d;
        d << std::setprecision(3) << "flat " << e_flat << ", S3 " << e_s3 << ", warp " << e_warp << ", h " << e_h;
        r.detail = d.str();
    } catch (const Error& e) {
        r.value = INFINITY;
        r.detail = e.what();
    }
    r.pass = r.value < r.tolerance;
    return r;
}

SuiteResult quintic_suite(int trials) {
    SuiteResult r{"quintic reproduction", false, 0.0, 1e-9, {}};
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> coef(-2.0, 2.0), width(0.1, 1.0);
    for (int k = 0; k < trials; ++k) {
        std::array<double, 6> c{};
        for (double& v : c) v = coef(rng);
        const double tau = width(rng);
        const Derivs a = eval_polynomial(c, tau), b = eval_polynomial(c, -tau);
        const auto q = quintic_coefficients(a.v, a.d1, a.d2, b.v, b.d1, b.d2, tau);
        for (int i = 0; i <= 10; ++i) {
            const double u = -tau + 2 * tau * i / 10;
            const Derivs x = eval_polynomial(c, u), y = eval_polynomial(q, u);
            r.value = std::max({r.value, std::abs(x.v - y.v), std::abs(x.d1 - y.d1), std::abs(x.d2 - y.d2)});
        }
    }
    r.pass = r.value < r.tolerance;
    r.detail = std::to_string(trials) + " random quintics";
    return r;
}

SuiteResult q_extrema_suite() {
    SuiteResult r{"q-profile extrema", false, 0.0, 1e-6, {}};
    const double eps = 0.25, tau = 1e-3 * eps;
    const double mean = 0.7, half = 1.3;
    // even part from a smooth u^2 term, odd part a pure second-derivative mismatch
    const auto c = quintic_coefficients(mean * tau * tau / 2, mean * tau, mean + half, mean * tau * tau / 2, -mean * tau,
                                        mean - half, tau);
    auto q = [&](double u) { return 2 * (eval_polynomial(c, u).d2 - mean) / half; };
    const double x = tau / std::sqrt(5.0);
    r.value = std::max({std::abs(q(tau) - 2), std::abs(q(-tau) + 2), std::abs(q(x) + 2 / std::sqrt(5.0)),
                        std::abs(q(-x) - 2 / std::sqrt(5.0))});
    double inner = 0.0;
    for (int i = 1; i < 2000; ++i) inner = std::max(inner, std::abs(q(-tau + 2 * tau * i / 2000)));
    const bool ends_dominate = inner <= 2.0 + 1e-12;
    r.pass = r.value < r.tolerance && ends_dominate;
    r.detail = "max interior |q| " + std::to_string(inner);
    return r;
}

SuiteResult shape_operator_suite() {
    SuiteResult r{"shape-operator identity", false, 0.0, 1e-5, {}};
    const Interval dom{-0.5, 0.5};
    const std::vector<BlockMetricCurve> curves = {
        BlockMetricCurve({{2, profiles::cap_coefficient(kPi / 3, 1.0, dom)}}, dom),
        BlockMetricCurve({{2, profiles::exponential_coefficient(1.0, 1.0, dom)}}, dom),
        BlockMetricCurve({{1, profiles::polynomial({1.0, 0.3, 0.2}, dom)}, {2, profiles::exponential_coefficient(1.0, -0.5, dom)}},
                         dom),
    };
    try {
        for (const BlockMetricCurve& curve : curves) {
            const ChartMetricField field = as_chart_field(curve);
            for (int i = 0; i < 20; ++i) {
                const double t = -0.45 + 0.9 * i / 19;
                Eigen::VectorXd x = Eigen::VectorXd::Constant(field.dim(), kPi / 2);
                x[0] = t;
                const CurvatureAtPoint cur = curvature_at(field, x);
                const Eigen::VectorXd dt = Eigen::VectorXd::Unit(field.dim(), 0);
                int coord = 1;
                for (std::size_t b = 0; b < curve.size(); ++b) {
                    // u is t-independent; at the equator of each block sphere it has unit round length
                    const Eigen::VectorXd u = Eigen::VectorXd::Unit(field.dim(), coord);
                    const Derivs w = curve.block(b).coeff(t);
                    const double dk = 0.5 * w.d2;
                    const double s2 = w.d1 * w.d1 / (4 * w.v);
                    r.value = std::max(r.value, std::abs(riemann_form(cur, dt, u, u, dt) + dk - s2));
                    coord += curve.block(b).fiber_dim;
                }
            }
        }
    } catch (const Error& e) {
        r.value = INFINITY;
        r.detail = e.what();
    }
    r.pass = r.value < r.tolerance;
    if (r.detail.empty()) r.detail = "3 curves x 20 points";
    return r;
}

std::vector<SuiteResult> run_selftest(double fd_step, int grid) {
    return {oracle_suite(fd_step, grid), quintic_suite(), q_extrema_suite(), shape_operator_suite()};
}

}  // namespace ricciglue::app
