#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ricciglue/block_metric.hpp"
#include "ricciglue/perelman_glue.hpp"
#include "ricciglue/report.hpp"

namespace ricciglue {

/// Solid ellipsoid E in D^m x D^n cut out by the profile curve mu(r) = (mu_s, mu_t), r in [0, r0].
struct EllipsoidSpec {
    int m = 3;
    int n = 3;
    DoublyWarpedMetric metric;
    ScalarProfile mu_s;
    ScalarProfile mu_t;
    double s0 = 1.0;
    double t0 = 1.0;
    double r0 = 0.0;
};

struct ProfileCurve {
    ScalarProfile mu_s;
    ScalarProfile mu_t;
    double r0 = 0.0;
};

/// Quarter ellipse (s0 sin th, t0 cos th) re-parameterised by arclength.
ProfileCurve build_mu(double s0, double t0);

/// Assembles and validates a spec: warp conditions, s0 < s1, t0 < t1, curve conditions.
EllipsoidSpec make_ellipsoid_spec(DoublyWarpedMetric metric, double s0, double t0);

/// Curve-condition residuals; `ok` when every one is within tolerance.
struct CurveCheck {
    bool ok = true;
    double unit_speed = 0.0;
    double endpoints = 0.0;
    double max_mu_s_d2 = 0.0;  ///< over (0, r0]; mu_s''(0) = 0 by oddness
    double max_mu_t_d2 = 0.0;  ///< over [0, r0); mu_t''(r0) = 0 by oddness
    double parity = 0.0;
};
CurveCheck check_curve(const EllipsoidSpec& spec, int samples = 100);

struct SphereEndReport {
    bool pass = false;
    double zero_sets = 0.0;     ///< (i)
    double parity_a = 0.0;      ///< (ii) alpha(mu_s) odd at 0, even at r0
    double parity_b = 0.0;      ///< (iii) beta(mu_t) even at 0, odd at r0
    double slope_a = 0.0;       ///< (iv) |d/dr alpha(mu_s(r))|_0 - 1|
    double slope_b = 0.0;       ///< (iv) |d/dr beta(mu_t(r))|_r0 + 1|
    bool positive_inside = true;
};
SphereEndReport sphere_end_check(const EllipsoidSpec& spec, double tol = 1e-6);

/// 1 + amplitude * step((x - flat) / (2 (center - flat))) with the exp(-1/x) smooth step.
ScalarProfile build_bump_scaling(double center, double amplitude, double flat_radius, Interval domain);

/// `base` with delta, gamma replaced by bumps of the given amplitude centred at t0 and s0.
EllipsoidSpec with_amplitude(const EllipsoidSpec& base, double amplitude, double flat_fraction = 0.5);

/// dr^2 + alpha^2(mu_s) ds^2_{m-1} + beta^2(mu_t) ds^2_{n-1}; requires delta == gamma == 1 on E.
BlockMetricCurve boundary_metric_curve(const EllipsoidSpec& spec);

/// Outward unit normal N = c_s d_s + c_t d_t of the boundary at r, with its r-derivative.
struct NormalAtR {
    double c_s = 0.0, c_t = 0.0;
    double dc_s = 0.0, dc_t = 0.0;
};
NormalAtR boundary_normal(const EllipsoidSpec& spec, double r);

struct IIProfile {
    std::vector<double> r;
    std::vector<double> ii_a;
    std::vector<double> ii_b;
    std::vector<double> ii_TT;
    std::vector<double> mixed_residual;
    /// largest |closed form - chart engine| over the rows where the engine was sampled
    double engine_deviation = 0.0;
    int engine_samples = 0;

    double min_eigenvalue() const;
    double argmin_r() const;
};

/// Closed-form II eigenvalues per r; `engine_every` > 0 cross-checks every k-th interior row against
/// second_fundamental_form (rows closer than 0.05 to a pole are skipped).
IIProfile ii_profile(const EllipsoidSpec& spec, int samples = 101, int engine_every = 1);
void write_ii_csv(std::ostream& os, const IIProfile& p);

struct AmplitudeOptions {
    double ii_floor = 1e-4;
    double ric_floor = 1e-3;
    int max_halvings = 30;
    double flat_fraction = 0.5;
    double box_margin = 0.25;
    int ricci_grid = 20;
    int ii_samples = 101;
    std::optional<double> forced_amplitude;
};

struct AmbientCheck {
    double min_ricci = 0.0;
    double s_lo = 0.0, s_hi = 0.0, t_lo = 0.0, t_hi = 0.0;
    int points = 0;
};
/// Min Ricci eigenvalue of the ambient metric on [0.05, s0 + margin] x [0.05, t0 + margin].
AmbientCheck ambient_ricci(const EllipsoidSpec& spec, const AmplitudeOptions& opts);

struct AmplitudeResult {
    EllipsoidSpec spec;
    double amplitude = 0.0;
    double min_ii = 0.0;
    AmbientCheck ambient;
    AmbientCheck base_ambient;
    int tried = 0;
};

/// First amplitude c in 1/2, 1/4, ... with min II > ii_floor * c and ambient Ricci > ric_floor / 2.
AmplitudeResult amplitude_search(const EllipsoidSpec& base, const AmplitudeOptions& opts = {});

struct CollarOptions {
    double delta0 = 0.2;
    double step = 1e-3;
    int r_samples = 41;
    double r_band = 0.05;
    double fd_r = 1e-3;
    double floor = 1e-3;
    GlueOptions glue;
};

/// Coefficients along the inward normal geodesic from mu(r): A = |d/dr|^2, Wa, Wb the sphere scales.
struct CollarFiber {
    double r = 0.0;
    ScalarProfile A, Wa, Wb;  ///< functions of the normal distance rho in [0, delta0]
    std::vector<double> margins;  ///< -G'(0)/G(0) per block
};
CollarFiber collar_at(const EllipsoidSpec& spec, double r, const CollarOptions& opts);

/// Mirror pair h1(t) = G(-t), h2(t) = G(t) with blocks (A: 1, Wa: m-1, Wb: n-1).
GluePair mirror_pair(const CollarFiber& fiber, int m, int n, double delta0);

struct DoubleResult {
    SmoothingParams params;
    CurvatureReport report;
    std::vector<double> r_nodes;
    std::vector<BlockMetricCurve> curves;  ///< glued coefficients per r node
    double band_min_ricci = 0.0;
    double band_min_at_t = 0.0, band_min_at_r = 0.0;
    double min_margin = 0.0;
};

/// Band minimum of Ric on the glued double over the r nodes, for fixed (eps, tau).
struct BandScan {
    double value = 0.0;
    double at_t = 0.0, at_r = 0.0;
    double c1_distance = 0.0;
};

DoubleResult double_ellipsoid(const EllipsoidSpec& spec, const CollarOptions& opts = {});

}  // namespace ricciglue
