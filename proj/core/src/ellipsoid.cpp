#include "ricciglue/ellipsoid.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ricciglue/chart_curvature.hpp"
#include "ricciglue/errors.hpp"
#include "ricciglue/profile_metrics.hpp"
#include "ricciglue/version.hpp"

namespace ricciglue {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kCurveTol = 1e-8;
constexpr double kPoleBand = 0.05;

class EllipseArc {
public:
    EllipseArc(double s0, double t0) : s0_(s0), t0_(t0) { r0_ = length(kPi / 2); }

    double r0() const { return r0_; }

    double speed(double th) const {
        const double c = std::cos(th), s = std::sin(th);
        return std::sqrt(s0_ * s0_ * c * c + t0_ * t0_ * s * s);
    }

    double length(double th) const {
        using boost::math::quadrature::gauss_kronrod;
        return gauss_kronrod<double, 61>::integrate([this](double x) { return speed(x); }, 0.0, th, 10, 1e-15);
    }

    double angle(double r) const {
        double th = r / r0_ * kPi / 2;
        for (int i = 0; i < 60; ++i) {
            const double step = (length(th) - r) / speed(th);
            th -= step;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(th))) break;
        }
        return th;
    }

    // Taylor series of th(r) from th' = 1 / speed(th), by three Picard sweeps.
    Jet angle_jet(double r) const {
        const double th0 = angle(r);
        Jet th(th0);
        for (int k = 0; k < 3; ++k) {
            const Jet c = cos(th), s = sin(th);
            const Jet f = Jet(1.0) / sqrt(s0_ * s0_ * c * c + t0_ * t0_ * s * s);
            th = Jet(th0, f.c0, f.c1 / 2.0, f.c2 / 3.0);
        }
        return th;
    }

    double s0() const { return s0_; }
    double t0() const { return t0_; }

private:
    double s0_, t0_, r0_ = 0.0;
};

double max_abs(std::initializer_list<double> xs) {
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

ProfileCurve build_mu(double s0, double t0) {
    if (!(s0 > 0.0 && t0 > 0.0)) throw Error(ErrorKind::InvalidInput, "ellipse semi-axes must be positive");
    auto arc = std::make_shared<const EllipseArc>(s0, t0);
    const double r0 = arc->r0();
    const Interval dom{0.0, r0};
    ScalarProfile mu_s([arc](double r) { return (arc->s0() * sin(arc->angle_jet(r))).derivs(); }, dom, Parity::odd,
                       Parity::even, {"ellipse_s", {{"s0", s0}, {"t0", t0}}});
    ScalarProfile mu_t([arc](double r) { return (arc->t0() * cos(arc->angle_jet(r))).derivs(); }, dom, Parity::even,
                       Parity::odd, {"ellipse_t", {{"s0", s0}, {"t0", t0}}});
    return {mu_s, mu_t, r0};
}

CurveCheck check_curve(const EllipsoidSpec& spec, int samples) {
    CurveCheck c;
    c.max_mu_s_d2 = c.max_mu_t_d2 = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const double r = spec.r0 * i / (samples - 1);
        const Derivs a = spec.mu_s(r), b = spec.mu_t(r);
        c.unit_speed = std::max(c.unit_speed, std::abs(a.d1 * a.d1 + b.d1 * b.d1 - 1.0));
        if (i > 0) c.max_mu_s_d2 = std::max(c.max_mu_s_d2, a.d2);
        if (i < samples - 1) c.max_mu_t_d2 = std::max(c.max_mu_t_d2, b.d2);
    }
    const Derivs s_a = spec.mu_s(0.0), s_b = spec.mu_s(spec.r0), t_a = spec.mu_t(0.0), t_b = spec.mu_t(spec.r0);
    c.endpoints = max_abs({s_a.v, s_b.v - spec.s0, s_a.d1 - 1.0, s_b.d1, t_a.v - spec.t0, t_b.v, t_a.d1, t_b.d1 + 1.0});
    c.parity = std::max({parity_residual(spec.mu_s, false), parity_residual(spec.mu_s, true),
                         parity_residual(spec.mu_t, false), parity_residual(spec.mu_t, true)});
    c.ok = c.unit_speed < kCurveTol && c.endpoints < kCurveTol && c.max_mu_s_d2 < 0.0 && c.max_mu_t_d2 < 0.0 &&
           c.parity < kCurveTol;
    return c;
}

EllipsoidSpec make_ellipsoid_spec(DoublyWarpedMetric metric, double s0, double t0) {
    validate(metric);
    if (!(s0 > 0.0 && s0 < metric.s_range.hi)) throw Error(ErrorKind::InvalidInput, "s0 must lie in (0, s1)");
    if (!(t0 > 0.0 && t0 < metric.t_range.hi)) throw Error(ErrorKind::InvalidInput, "t0 must lie in (0, t1)");
    const ProfileCurve mu = build_mu(s0, t0);
    EllipsoidSpec spec{metric.m, metric.n, std::move(metric), mu.mu_s, mu.mu_t, s0, t0, mu.r0};
    if (!check_curve(spec).ok) throw Error(ErrorKind::InvalidInput, "profile curve violates its endpoint conditions");
    return spec;
}

SphereEndReport sphere_end_check(const EllipsoidSpec& spec, double tol) {
    const ScalarProfile a0 = compose(spec.metric.alpha, spec.mu_s);
    const ScalarProfile b0 = compose(spec.metric.beta, spec.mu_t);
    const ScalarProfile a([a0](double r) { return a0(r); }, a0.domain(), Parity::odd, Parity::even);
    const ScalarProfile b([b0](double r) { return b0(r); }, b0.domain(), Parity::even, Parity::odd);
    SphereEndReport rep;
    rep.zero_sets = max_abs({a.value(0.0), b.value(spec.r0)});
    for (int i = 1; i < 100; ++i) {
        const double r = spec.r0 * i / 100.0;
        if (!(a.value(r) > 0.0 && b.value(r) > 0.0)) rep.positive_inside = false;
    }
    if (!(a.value(spec.r0) > 0.0 && b.value(0.0) > 0.0)) rep.positive_inside = false;
    rep.parity_a = std::max(parity_residual(a, false), parity_residual(a, true));
    rep.parity_b = std::max(parity_residual(b, false), parity_residual(b, true));
    rep.slope_a = std::abs(a.d1(0.0) - 1.0);
    rep.slope_b = std::abs(b.d1(spec.r0) + 1.0);
    rep.pass = rep.positive_inside && rep.zero_sets < tol && rep.parity_a < tol && rep.parity_b < tol &&
               rep.slope_a < tol && rep.slope_b < tol;
    return rep;
}

ScalarProfile build_bump_scaling(double center, double amplitude, double flat_radius, Interval domain) {
    if (!(amplitude >= 0.0)) throw Error(ErrorKind::InvalidInput, "bump amplitude must be non-negative");
    if (!(flat_radius >= 0.0 && flat_radius < center)) throw Error(ErrorKind::InvalidInput, "flat radius must lie in [0, center)");
    const double width = 2.0 * (center - flat_radius);
    return ScalarProfile(
        [=](double t) -> Derivs {
            const double x = (t - flat_radius) / width;
            if (amplitude == 0.0 || x <= 0.0) return {1.0, 0.0, 0.0, 0.0};
            if (x >= 1.0) return {1.0 + amplitude, 0.0, 0.0, 0.0};
            const Jet X = (Jet::variable(t) - flat_radius) / width;
            const Jet f = exp(Jet(-1.0) / X);
            const Jet g = exp(Jet(-1.0) / (Jet(1.0) - X));
            return (Jet(1.0) + amplitude * (f / (f + g))).derivs();
        },
        domain, Parity::even, Parity::none, {"bump", {{"center", center}, {"amplitude", amplitude}, {"flat", flat_radius}}});
}

EllipsoidSpec with_amplitude(const EllipsoidSpec& base, double amplitude, double flat_fraction) {
    EllipsoidSpec out = base;
    out.metric.delta = build_bump_scaling(base.t0, amplitude, flat_fraction * base.t0, base.metric.t_range);
    out.metric.gamma = build_bump_scaling(base.s0, amplitude, flat_fraction * base.s0, base.metric.s_range);
    return out;
}

BlockMetricCurve boundary_metric_curve(const EllipsoidSpec& spec) {
    for (int i = 0; i <= 100; ++i) {
        const double r = spec.r0 * i / 100.0;
        if (std::abs(spec.metric.delta.value(spec.mu_t.value(r)) - 1.0) > 1e-12 ||
            std::abs(spec.metric.gamma.value(spec.mu_s.value(r)) - 1.0) > 1e-12)
            throw Error(ErrorKind::NotAProduct, "boundary curve needs delta == gamma == 1 along the boundary");
    }
    const Interval dom{0.0, spec.r0};
    return BlockMetricCurve({{spec.m - 1, square(compose(spec.metric.alpha, spec.mu_s))},
                             {spec.n - 1, square(compose(spec.metric.beta, spec.mu_t))}},
                            dom);
}

NormalAtR boundary_normal(const EllipsoidSpec& spec, double r) {
    const Jet ms = Jet::from_derivs(spec.mu_s(r)), mt = Jet::from_derivs(spec.mu_t(r));
    const Jet dms = derivative(ms), dmt = derivative(mt);
    const Jet d = compose(spec.metric.delta(mt.c0), mt);
    const Jet g = compose(spec.metric.gamma(ms.c0), ms);
    const Jet nu2 = dmt * dmt / (d * d) + dms * dms / (g * g);
    if (!(nu2.c0 > 0.0)) throw Error(ErrorKind::DegenerateNormal, "boundary tangent vanishes");
    const Jet nu = sqrt(nu2);
    const Jet cs = -dmt / (d * d * nu), ct = dms / (g * g * nu);
    return {cs.c0, ct.c0, cs.c1, ct.c1};
}

double IIProfile::min_eigenvalue() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.size(); ++i) m = std::min({m, ii_a[i], ii_b[i], ii_TT[i]});
    return m;
}

double IIProfile::argmin_r() const {
    double m = std::numeric_limits<double>::infinity(), at = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double v = std::min({ii_a[i], ii_b[i], ii_TT[i]});
        if (v < m) {
            m = v;
            at = r[i];
        }
    }
    return at;
}

namespace {

struct IIRow {
    double a = 0.0, b = 0.0, tt = 0.0;
};

IIRow ii_closed_form(const EllipsoidSpec& spec, double r, bool at_start, bool at_end) {
    const Derivs ms = spec.mu_s(r), mt = spec.mu_t(r);
    const Derivs d = spec.metric.delta(mt.v), g = spec.metric.gamma(ms.v);
    const Derivs al = spec.metric.alpha(ms.v), be = spec.metric.beta(mt.v);
    const double nu = std::sqrt(mt.d1 * mt.d1 / (d.v * d.v) + ms.d1 * ms.d1 / (g.v * g.v));
    if (!(nu > 0.0)) throw Error(ErrorKind::DegenerateNormal, "boundary tangent vanishes");
    const double cs = -mt.d1 / (d.v * d.v * nu), ct = ms.d1 / (g.v * g.v * nu);
    // acceleration of mu in the (s, t) metric delta^2 ds^2 + gamma^2 dt^2
    const double acc_s = ms.d2 + 2 * d.d1 / d.v * ms.d1 * mt.d1 - g.v * g.d1 / (d.v * d.v) * mt.d1 * mt.d1;
    const double acc_t = mt.d2 - d.v * d.d1 / (g.v * g.v) * ms.d1 * ms.d1 + 2 * g.d1 / g.v * ms.d1 * mt.d1;
    const double iitt = -(d.v * d.v * cs * acc_s + g.v * g.v * ct * acc_t);
    const double gtt = d.v * d.v * ms.d1 * ms.d1 + g.v * g.v * mt.d1 * mt.d1;
    IIRow row;
    row.tt = iitt / gtt;
    // at the poles the sphere directions become tangent to mu
    row.a = at_start ? row.tt : cs * al.d1 / al.v + ct * d.d1 / d.v;
    row.b = at_end ? row.tt : cs * g.d1 / g.v + ct * be.d1 / be.v;
    return row;
}

}  // namespace

IIProfile ii_profile(const EllipsoidSpec& spec, int samples, int engine_every) {
    if (samples < 2) throw Error(ErrorKind::InvalidInput, "II profile needs at least two samples");
    IIProfile p;
    const ChartMetricField field = as_chart_field(spec.metric);
    const int dim = field.dim();
    const int na = spec.m - 1;
    const DoublyWarpedMetric& met = spec.metric;
    const double s0 = spec.s0, t0 = spec.t0;
    auto normal_field = [&met, s0, t0, dim](const Eigen::VectorXd& y) {
        const double ps = 2 * y[0] / (s0 * s0), pt = 2 * y[1] / (t0 * t0);
        const double gss = std::pow(met.delta.value(y[1]), 2), gtt = std::pow(met.gamma.value(y[0]), 2);
        const double norm = std::sqrt(ps * ps / gss + pt * pt / gtt);
        Eigen::VectorXd N = Eigen::VectorXd::Zero(dim);
        N[0] = ps / gss / norm;
        N[1] = pt / gtt / norm;
        return N;
    };
    for (int i = 0; i < samples; ++i) {
        const double r = spec.r0 * i / (samples - 1);
        const IIRow row = ii_closed_form(spec, r, i == 0, i == samples - 1);
        p.r.push_back(r);
        p.ii_a.push_back(row.a);
        p.ii_b.push_back(row.b);
        p.ii_TT.push_back(row.tt);
        double mixed = 0.0;
        const double s = spec.mu_s.value(r), t = spec.mu_t.value(r);
        if (engine_every > 0 && i % engine_every == 0 && s > kPoleBand && t > kPoleBand) {
            Eigen::VectorXd x = Eigen::VectorXd::Constant(dim, kPi / 2);
            x[0] = s;
            x[1] = t;
            HypersurfaceFrame frame;
            frame.normal_field = normal_field;
            frame.normal = normal_field(x);
            Eigen::VectorXd T = Eigen::VectorXd::Zero(dim);
            T[0] = spec.mu_s.d1(r);
            T[1] = spec.mu_t.d1(r);
            frame.tangent_basis.push_back(T);
            for (int j = 2; j < dim; ++j) frame.tangent_basis.push_back(Eigen::VectorXd::Unit(dim, j));
            const Eigen::MatrixXd II = second_fundamental_form(field, x, frame);
            const Eigen::MatrixXd g = field.metric(x);
            std::vector<double> norms;
            for (const auto& u : frame.tangent_basis) norms.push_back(u.dot(g * u));
            double dev = std::abs(II(0, 0) / norms[0] - row.tt);
            for (int j = 1; j < dim - 1; ++j) {
                const double closed = j <= na ? row.a : row.b;
                dev = std::max(dev, std::abs(II(j, j) / norms[j] - closed));
            }
            for (int j = 0; j < dim - 1; ++j)
                for (int k = j + 1; k < dim - 1; ++k)
                    mixed = std::max(mixed, std::abs(II(j, k)) / std::sqrt(norms[j] * norms[k]));
            p.engine_deviation = std::max(p.engine_deviation, dev);
            ++p.engine_samples;
        }
        p.mixed_residual.push_back(mixed);
    }
    return p;
}

void write_ii_csv(std::ostream& os, const IIProfile& p) {
    os << "r,ii_a,ii_b,ii_TT,mixed_residual\n" << std::setprecision(17);
    for (std::size_t i = 0; i < p.r.size(); ++i)
        os << p.r[i] << ',' << p.ii_a[i] << ',' << p.ii_b[i] << ',' << p.ii_TT[i] << ',' << p.mixed_residual[i] << '\n';
}

AmbientCheck ambient_ricci(const EllipsoidSpec& spec, const AmplitudeOptions& opts) {
    if (opts.ricci_grid < 2) throw Error(ErrorKind::InvalidInput, "ambient grid needs at least 2 points per side");
    const ChartMetricField field = as_chart_field(spec.metric);
    AmbientCheck out;
    out.s_lo = kPoleBand;
    out.t_lo = kPoleBand;
    out.s_hi = std::min(spec.s0 + opts.box_margin, spec.metric.s_range.hi - 0.01);
    out.t_hi = std::min(spec.t0 + opts.box_margin, spec.metric.t_range.hi - 0.01);
    LatticeGrid grid = interior_grid(field, {0, 1}, opts.ricci_grid, 0.0);
    grid.lo[0] = out.s_lo;
    grid.hi[0] = out.s_hi;
    grid.lo[1] = out.t_lo;
    grid.hi[1] = out.t_hi;
    out.points = static_cast<int>(grid.size());
    out.min_ricci = min_ricci_on_grid(field, grid).value;
    return out;
}

AmplitudeResult amplitude_search(const EllipsoidSpec& base, const AmplitudeOptions& opts) {
    if (!sphere_end_check(base).pass) throw Error(ErrorKind::InvalidInput, "base spec fails the sphere-end conditions");
    AmplitudeResult res;
    res.base_ambient = ambient_ricci(base, opts);
    if (!(res.base_ambient.min_ricci > opts.ric_floor))
        throw Error(ErrorKind::SearchExhausted, "ambient Ricci " + std::to_string(res.base_ambient.min_ricci) +
                                                    " does not exceed the Ricci floor");
    std::vector<double> candidates;
    if (opts.forced_amplitude) {
        candidates.push_back(*opts.forced_amplitude);
    } else {
        double c = 1.0;
        for (int k = 0; k < opts.max_halvings; ++k) candidates.push_back(c /= 2);
    }
    bool ii_failed = false;
    for (double c : candidates) {
        ++res.tried;
        EllipsoidSpec spec = with_amplitude(base, c, opts.flat_fraction);
        const double min_ii = ii_profile(spec, opts.ii_samples, 0).min_eigenvalue();
        if (!(min_ii > opts.ii_floor * c)) {
            ii_failed = true;
            continue;
        }
        const AmbientCheck amb = ambient_ricci(spec, opts);
        if (!(amb.min_ricci > opts.ric_floor / 2)) continue;
        res.spec = std::move(spec);
        res.amplitude = c;
        res.min_ii = min_ii;
        res.ambient = amb;
        return res;
    }
    if (opts.forced_amplitude && ii_failed)
        throw Error(ErrorKind::HypothesisViolated, "boundary II does not exceed its floor at the forced amplitude");
    throw Error(ErrorKind::SearchExhausted, "no amplitude satisfies both floors");
}

namespace {

// Derivs in rho of a collar coefficient, sampled at RK4 nodes and joined by quintic Hermite pieces.
class NodeProfile {
public:
    NodeProfile(double h, std::vector<Derivs> nodes) : h_(h), nodes_(std::move(nodes)) {
        for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
            const Derivs& l = nodes_[i];
            const Derivs& r = nodes_[i + 1];
            pieces_.push_back(quintic_coefficients(r.v, r.d1, r.d2, l.v, l.d1, l.d2, h_ / 2));
        }
    }

    Derivs operator()(double rho) const {
        const double x = rho / h_;
        const long last = static_cast<long>(pieces_.size()) - 1;
        const long i = std::clamp(static_cast<long>(std::floor(x)), 0L, last);
        return eval_polynomial(pieces_[i], rho - (i + 0.5) * h_);
    }

private:
    double h_;
    std::vector<Derivs> nodes_;
    std::vector<std::array<double, 6>> pieces_;
};

// Christoffel data of delta^2(t) ds^2 + gamma^2(s) dt^2 and its first partials.
struct PlaneGeometry {
    Derivs d, g;  // delta(t), gamma(s)
    double a, b, c, e;  // G^s_st, G^s_tt, G^t_ss, G^t_st
    double a_t, b_s, b_t, c_s, c_t, e_s;
};

PlaneGeometry plane_at(const DoublyWarpedMetric& met, double s, double t) {
    PlaneGeometry p;
    p.d = met.delta(t);
    p.g = met.gamma(s);
    const double d = p.d.v, d1 = p.d.d1, d2 = p.d.d2, g = p.g.v, g1 = p.g.d1, g2 = p.g.d2;
    p.a = d1 / d;
    p.b = -g * g1 / (d * d);
    p.c = -d * d1 / (g * g);
    p.e = g1 / g;
    p.a_t = d2 / d - d1 * d1 / (d * d);
    p.b_s = -(g1 * g1 + g * g2) / (d * d);
    p.b_t = 2 * g * g1 * d1 / (d * d * d);
    p.c_t = -(d1 * d1 + d * d2) / (g * g);
    p.c_s = 2 * d * d1 * g1 / (g * g * g);
    p.e_s = g2 / g - g1 * g1 / (g * g);
    return p;
}

using State = std::array<double, 8>;  // x_s, x_t, v_s, v_t, J_s, J_t, P_s, P_t

State collar_rhs(const DoublyWarpedMetric& met, const State& y) {
    const PlaneGeometry p = plane_at(met, y[0], y[1]);
    const double vs = y[2], vt = y[3], Js = y[4], Jt = y[5], Ps = y[6], Pt = y[7];
    const double dJa = p.a_t * Jt, dJb = p.b_s * Js + p.b_t * Jt, dJc = p.c_s * Js + p.c_t * Jt, dJe = p.e_s * Js;
    State f;
    f[0] = vs;
    f[1] = vt;
    f[2] = -(2 * p.a * vs * vt + p.b * vt * vt);
    f[3] = -(p.c * vs * vs + 2 * p.e * vs * vt);
    f[4] = Ps;
    f[5] = Pt;
    f[6] = -(2 * dJa * vs * vt + dJb * vt * vt) - 2 * (p.a * (vs * Pt + vt * Ps) + p.b * vt * Pt);
    f[7] = -(dJc * vs * vs + 2 * dJe * vs * vt) - 2 * (p.c * vs * Ps + p.e * (vs * Pt + vt * Ps));
    return f;
}

// F = P(s) Q(t) along the flow, with x' = v and x'' = acc.
Derivs product_along(const Derivs& P, const Derivs& Q, double vs, double vt, double as, double at) {
    return {P.v * Q.v, P.d1 * vs * Q.v + P.v * Q.d1 * vt,
            P.d2 * vs * vs * Q.v + 2 * P.d1 * Q.d1 * vs * vt + P.v * Q.d2 * vt * vt + P.d1 * Q.v * as + P.v * Q.d1 * at,
            0.0};
}

Derivs squared(const Derivs& f) {
    const Jet a = Jet::from_derivs(f);
    return (a * a).derivs();
}

}  // namespace

CollarFiber collar_at(const EllipsoidSpec& spec, double r, const CollarOptions& opts) {
    if (!(opts.delta0 > 0.0 && opts.step > 0.0)) throw Error(ErrorKind::InvalidInput, "collar width and step must be positive");
    const DoublyWarpedMetric& met = spec.metric;
    const int steps = static_cast<int>(std::ceil(opts.delta0 / opts.step));
    const double h = opts.delta0 / steps;
    const NormalAtR N = boundary_normal(spec, r);
    State y{spec.mu_s.value(r), spec.mu_t.value(r), -N.c_s, -N.c_t, spec.mu_s.d1(r), spec.mu_t.d1(r), -N.dc_s, -N.dc_t};
    std::vector<Derivs> A, Wa, Wb;
    auto record = [&](const State& st, double rho) {
        if (!(st[0] > 0.0 && st[1] > 0.0 && st[0] < met.s_range.hi && st[1] < met.t_range.hi))
            throw Error(ErrorKind::CollarTooThin, "normal flow leaves the domain at rho=" + std::to_string(rho));
        const State f = collar_rhs(met, st);
        const double vs = st[2], vt = st[3], Js = st[4], Jt = st[5], Ps = st[6], Pt = st[7];
        const double as = f[2], at = f[3], dPs = f[6], dPt = f[7];
        const PlaneGeometry p = plane_at(met, st[0], st[1]);
        const Derivs D2 = squared(p.d), G2 = squared(p.g);  // delta^2(t), gamma^2(s)
        const double gss = D2.v, gtt = G2.v;
        const double dgss = D2.d1 * vt, dgtt = G2.d1 * vs;
        const double ddgss = D2.d2 * vt * vt + D2.d1 * at, ddgtt = G2.d2 * vs * vs + G2.d1 * as;
        Derivs a;
        a.v = gss * Js * Js + gtt * Jt * Jt;
        a.d1 = dgss * Js * Js + dgtt * Jt * Jt + 2 * (gss * Js * Ps + gtt * Jt * Pt);
        a.d2 = ddgss * Js * Js + 4 * dgss * Js * Ps + 2 * gss * (Ps * Ps + Js * dPs) + ddgtt * Jt * Jt +
               4 * dgtt * Jt * Pt + 2 * gtt * (Pt * Pt + Jt * dPt);
        if (!(a.v > 0.0)) throw Error(ErrorKind::CollarTooThin, "normal flow focuses at rho=" + std::to_string(rho));
        A.push_back(a);
        const Derivs al2 = squared(met.alpha(st[0])), be2 = squared(met.beta(st[1]));
        Wa.push_back(product_along(al2, D2, vs, vt, as, at));
        Wb.push_back(product_along(G2, be2, vs, vt, as, at));
    };
    record(y, 0.0);
    for (int k = 0; k < steps; ++k) {
        auto add = [](const State& s, const State& d, double w) {
            State o;
            for (int i = 0; i < 8; ++i) o[i] = s[i] + w * d[i];
            return o;
        };
        const State k1 = collar_rhs(met, y);
        const State k2 = collar_rhs(met, add(y, k1, h / 2));
        const State k3 = collar_rhs(met, add(y, k2, h / 2));
        const State k4 = collar_rhs(met, add(y, k3, h));
        for (int i = 0; i < 8; ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        record(y, (k + 1) * h);
    }
    CollarFiber out;
    out.r = r;
    const Interval dom{0.0, opts.delta0};
    auto wrap = [&](std::vector<Derivs> nodes) {
        auto np = std::make_shared<const NodeProfile>(h, std::move(nodes));
        return ScalarProfile([np](double rho) { return (*np)(rho); }, dom);
    };
    for (const auto* v : {&A, &Wa, &Wb}) out.margins.push_back(-(*v)[0].d1 / (*v)[0].v);
    out.A = wrap(std::move(A));
    out.Wa = wrap(std::move(Wa));
    out.Wb = wrap(std::move(Wb));
    return out;
}

GluePair mirror_pair(const CollarFiber& fiber, int m, int n, double delta0) {
    const Interval l{-delta0, 0.0}, r{0.0, delta0};
    auto left = [&](const ScalarProfile& G) {
        return ScalarProfile(
            [G](double t) {
                const Derivs d = G(-t);
                return Derivs{d.v, -d.d1, d.d2, -d.d3};
            },
            l);
    };
    auto right = [&](const ScalarProfile& G) { return ScalarProfile([G](double t) { return G(t); }, r); };
    return {BlockMetricCurve({{1, left(fiber.A)}, {m - 1, left(fiber.Wa)}, {n - 1, left(fiber.Wb)}}, l),
            BlockMetricCurve({{1, right(fiber.A)}, {m - 1, right(fiber.Wa)}, {n - 1, right(fiber.Wb)}}, r), delta0};
}

namespace {

constexpr int kOffsets[5] = {-2, -1, 0, 1, 2};

struct BandCurves {
    std::vector<double> r;
    // per node, curves at r + k h_r for k in kOffsets
    std::vector<std::array<BlockMetricCurve, 5>> curves;
};

// Polar-chart factor of one sphere entry, with gradient and Hessian over that sphere's angles.
struct SphereFactor {
    double v = 1.0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
};

std::vector<SphereFactor> sphere_factors(int k, double angle) {
    const double s2 = std::sin(angle) * std::sin(angle), ds = std::sin(2 * angle), dds = 2 * std::cos(2 * angle);
    std::vector<SphereFactor> out(k);
    for (int j = 0; j < k; ++j) {
        SphereFactor& f = out[j];
        f.grad = Eigen::VectorXd::Zero(k);
        f.hess = Eigen::MatrixXd::Zero(k, k);
        f.v = std::pow(s2, j);
        for (int i = 0; i < j; ++i) {
            f.grad[i] = ds * std::pow(s2, j - 1);
            f.hess(i, i) = dds * std::pow(s2, j - 1);
            for (int l = 0; l < j; ++l)
                if (l != i) f.hess(i, l) = ds * ds * std::pow(s2, j - 2);
        }
    }
    return out;
}

// Ricci minimum of dt^2 + A dr^2 + Wa ds^2_{m-1} + Wb ds^2_{n-1} at (t, r_node).
double band_point(const std::array<BlockMetricCurve, 5>& c, double t, double hr, int m, int n) {
    const int dim = 2 + (m - 1) + (n - 1);
    MetricJet J;
    J.g = Eigen::MatrixXd::Zero(dim, dim);
    J.dg.assign(dim, Eigen::MatrixXd::Zero(dim, dim));
    J.ddg.assign(static_cast<std::size_t>(dim) * dim, Eigen::MatrixXd::Zero(dim, dim));
    J.g(0, 0) = 1.0;
    auto dd = [&](int k, int l) -> Eigen::MatrixXd& { return J.ddg[k * dim + l]; };
    const std::vector<SphereFactor> sa = sphere_factors(m - 1, kPi / 2), sb = sphere_factors(n - 1, kPi / 2);
    for (int b = 0; b < 3; ++b) {
        std::array<Derivs, 5> F;
        for (int k = 0; k < 5; ++k) F[k] = c[k].block(b).coeff(t);
        const double W = F[2].v, Wt = F[2].d1, Wtt = F[2].d2;
        const double Wr = (F[0].v - 8 * F[1].v + 8 * F[3].v - F[4].v) / (12 * hr);
        const double Wrr = (-F[0].v + 16 * F[1].v - 30 * F[2].v + 16 * F[3].v - F[4].v) / (12 * hr * hr);
        const double Wtr = (F[0].d1 - 8 * F[1].d1 + 8 * F[3].d1 - F[4].d1) / (12 * hr);
        const std::vector<SphereFactor>* fac = b == 0 ? nullptr : b == 1 ? &sa : &sb;
        const int first = b == 0 ? 1 : b == 1 ? 2 : 2 + (m - 1);
        const int count = b == 0 ? 1 : b == 1 ? m - 1 : n - 1;
        for (int j = 0; j < count; ++j) {
            const int e = first + j;
            SphereFactor one{1.0, Eigen::VectorXd::Zero(count), Eigen::MatrixXd::Zero(count, count)};
            const SphereFactor& f = fac ? (*fac)[j] : one;
            J.g(e, e) = W * f.v;
            J.dg[0](e, e) = Wt * f.v;
            J.dg[1](e, e) = Wr * f.v;
            dd(0, 0)(e, e) = Wtt * f.v;
            dd(1, 1)(e, e) = Wrr * f.v;
            dd(0, 1)(e, e) = dd(1, 0)(e, e) = Wtr * f.v;
            if (!fac) continue;
            for (int i = 0; i < count; ++i) {
                J.dg[first + i](e, e) = W * f.grad[i];
                dd(0, first + i)(e, e) = dd(first + i, 0)(e, e) = Wt * f.grad[i];
                dd(1, first + i)(e, e) = dd(first + i, 1)(e, e) = Wr * f.grad[i];
                for (int l = 0; l < count; ++l) dd(first + i, first + l)(e, e) = W * f.hess(i, l);
            }
        }
    }
    const CurvatureAtPoint cur = curvature_from_jet(J, Eigen::VectorXd::Zero(dim));
    return min_ricci_eigenvalue(cur.ricci, cur.metric);
}

BandScan scan_band(const std::vector<std::array<GluePair, 5>>& pairs, const std::vector<double>& r, double eps,
                   double tau, const CollarOptions& opts, int m, int n, int refine,
                   std::vector<BlockMetricCurve>* keep = nullptr) {
    BandScan out{std::numeric_limits<double>::infinity(), 0.0, 0.0, 0.0};
    const Interval dom{-opts.delta0, opts.delta0};
    const std::vector<double> ts = check_points(dom, eps, tau, opts.glue, refine);
    std::vector<double> window;
    if (tau > 0.0)
        for (double c : {-eps, eps})
            for (int i = 0; i <= opts.glue.window_samples; ++i) window.push_back(c - tau + 2 * tau * i / opts.glue.window_samples);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        std::array<BlockMetricCurve, 5> c;
        for (int j = 0; j < 5; ++j) c[j] = tau > 0.0 ? c2_join(pairs[k][j], eps, tau) : c1_join(pairs[k][j], eps);
        for (double t : ts) {
            const double v = band_point(c, t, opts.fd_r, m, n);
            if (v < out.value) out = {v, t, r[k], out.c1_distance};
        }
        if (tau > 0.0) out.c1_distance = std::max(out.c1_distance, c1_distance(c[2], c1_join(pairs[k][2], eps), window));
        if (keep) keep->push_back(c[2]);
    }
    return out;
}

}  // namespace

DoubleResult double_ellipsoid(const EllipsoidSpec& spec, const CollarOptions& opts) {
    if (opts.r_samples < 2) throw Error(ErrorKind::InvalidInput, "need at least two r samples");
    const IIProfile ii = ii_profile(spec, 101, 0);
    if (!(ii.min_eigenvalue() > 0.0))
        throw Error(ErrorKind::HypothesisViolated, "boundary II is not positive (min " + std::to_string(ii.min_eigenvalue()) +
                                                       " at r=" + std::to_string(ii.argmin_r()) + ")");
    DoubleResult res;
    std::vector<std::array<GluePair, 5>> pairs;
    double min_margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < opts.r_samples; ++k) {
        const double r = opts.r_band + (spec.r0 - 2 * opts.r_band) * k / (opts.r_samples - 1);
        res.r_nodes.push_back(r);
        std::array<GluePair, 5> row;
        for (int j = 0; j < 5; ++j) {
            const CollarFiber f = collar_at(spec, r + kOffsets[j] * opts.fd_r, opts);
            if (kOffsets[j] == 0)
                for (double mg : f.margins) min_margin = std::min(min_margin, mg);
            row[j] = mirror_pair(f, spec.m, spec.n, opts.delta0);
        }
        pairs.push_back(std::move(row));
    }
    res.min_margin = min_margin;
    if (!(min_margin > kMarginTol))
        throw Error(ErrorKind::HypothesisViolated, "collar margin not positive (" + std::to_string(min_margin) + ")");

    double eps = opts.delta0;
    double c1_value = 0.0;
    bool found = false;
    for (int k = 0; k < opts.glue.max_halvings && !found; ++k) {
        eps /= 2;
        c1_value = scan_band(pairs, res.r_nodes, eps, 0.0, opts, spec.m, spec.n, 1).value;
        found = c1_value > opts.floor;
    }
    if (!found) throw Error(ErrorKind::SearchExhausted, "no epsilon makes the C1 double Ricci-positive above the floor");
    double tau = eps / 10;
    for (int k = 0; k < opts.glue.max_halvings; ++k, tau /= 2) {
        const BandScan s = scan_band(pairs, res.r_nodes, eps, tau, opts, spec.m, spec.n, 1);
        if (!(s.value > opts.floor && s.c1_distance < opts.glue.c1_fraction * c1_value)) continue;
        res.params = {eps, tau, opts.floor};
        const BandScan fine = scan_band(pairs, res.r_nodes, eps, tau, opts, spec.m, spec.n, 2, &res.curves);
        res.band_min_ricci = fine.value;
        res.band_min_at_t = fine.at_t;
        res.band_min_at_r = fine.at_r;
        CurvatureReport& rep = res.report;
        rep.kind = "ellipsoid-double";
        rep.lambda_min_ricci = fine.value;
        rep.lambda_min_ricci_at = fine.at_t;
        rep.lambda_min_ii = ii.min_eigenvalue();
        rep.epsilon = eps;
        rep.tau = tau;
        rep.floor = opts.floor;
        rep.smoothness = "C2";
        const Interval dom{-opts.delta0, opts.delta0};
        rep.grids.push_back({"t_band", static_cast<int>(check_points(dom, eps, tau, opts.glue, 2).size()), dom.lo, dom.hi});
        rep.grids.push_back({"r_band", opts.r_samples, res.r_nodes.front(), res.r_nodes.back()});
        rep.grids.push_back({"r_ii", 101, 0.0, spec.r0});
        rep.margins = {min_margin};
        rep.certified = fine.value > 0.0;
        rep.extras = {{"r0", spec.r0},
                      {"collar_delta0", opts.delta0},
                      {"lambda_min_at_r", fine.at_r},
                      {"c1_distance", fine.c1_distance},
                      {"c1_margin", c1_value}};
        rep.scope = "C2 double of E on the sampled (t, r) band; r within r_band of the poles is not sampled";
        rep.provenance.tool_version = kVersion;
        return res;
    }
    throw Error(ErrorKind::SearchExhausted, "no tau keeps the smoothed double above the floor");
}

}  // namespace ricciglue
