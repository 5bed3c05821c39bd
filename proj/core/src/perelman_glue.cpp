#include "ricciglue/perelman_glue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ricciglue/errors.hpp"
#include "ricciglue/profile_metrics.hpp"
#include "ricciglue/version.hpp"

namespace ricciglue {

namespace {

constexpr double kBoundaryTol = 1e-12;

const char* smoothness_name(SmoothnessClass c) { return c == SmoothnessClass::C1 ? "C1" : "C2"; }

struct Window {
    double center = 0.0;
    double tau = 0.0;
    std::array<double, 6> c{};
};

Window make_window(double center, double tau, const Derivs& plus, const Derivs& minus) {
    return {center, tau, quintic_coefficients(plus.v, plus.d1, plus.d2, minus.v, minus.d1, minus.d2, tau)};
}

void require_epsilon(const GluePair& pair, double epsilon) {
    if (!(epsilon > 0.0)) throw Error(ErrorKind::InvalidInput, "epsilon must be positive");
    if (!(epsilon < pair.delta0)) throw Error(ErrorKind::EpsilonTooLarge, "epsilon must be smaller than delta0");
}

}  // namespace

void validate(const GluePair& pair) {
    if (!(pair.delta0 > 0.0)) throw Error(ErrorKind::InvalidInput, "delta0 must be positive");
    if (pair.left.size() != pair.right.size())
        throw Error(ErrorKind::BoundaryMismatch, "left and right curves have different block counts");
    if (pair.left.domain().hi != 0.0 || pair.right.domain().lo != 0.0 || pair.left.domain().lo > -pair.delta0 ||
        pair.right.domain().hi < pair.delta0)
        throw Error(ErrorKind::InvalidInput, "pair domains must be (-delta0, 0] and [0, delta0)");
    for (std::size_t b = 0; b < pair.left.size(); ++b) {
        if (pair.left.block(b).fiber_dim != pair.right.block(b).fiber_dim)
            throw Error(ErrorKind::BoundaryMismatch, "block " + std::to_string(b) + " fiber dimensions differ");
        const double wl = pair.left.block(b).coeff.value(0.0), wr = pair.right.block(b).coeff.value(0.0);
        if (std::abs(wl - wr) > kBoundaryTol)
            throw Error(ErrorKind::BoundaryMismatch, "block " + std::to_string(b) + " boundary values differ");
    }
}

GluePair cap_pair(double theta, int fiber_dim, double delta0) {
    if (!(theta > delta0 && theta + delta0 < std::numbers::pi))
        throw Error(ErrorKind::InvalidInput, "cap angle must keep both caps away from their poles");
    const Interval l{-delta0, 0.0}, r{0.0, delta0};
    return {BlockMetricCurve({{fiber_dim, profiles::cap_coefficient(theta, 1.0, l)}}, l),
            BlockMetricCurve({{fiber_dim, profiles::cap_coefficient(theta, -1.0, r)}}, r), delta0};
}

std::vector<double> perelman_margin(const GluePair& pair) {
    validate(pair);
    std::vector<double> out;
    for (std::size_t b = 0; b < pair.left.size(); ++b) {
        const Derivs l = pair.left.block(b).coeff(0.0), r = pair.right.block(b).coeff(0.0);
        out.push_back(0.5 * (l.d1 - r.d1) / l.v);
    }
    return out;
}

CubicJoin CubicJoin::fit(double a, double da, double b, double db, double eps) {
    const double D = (b - a) / (2 * eps);
    return {eps, a, b, da - D, db - D};
}

Derivs CubicJoin::operator()(double t) const {
    const Jet T = Jet::variable(t);
    const double e2 = 4 * eps * eps;
    const Jet g = (T + eps) / (2 * eps) * b - (T - eps) / (2 * eps) * a + (T - eps) * (T - eps) * (T + eps) / e2 * B1 +
                  (T + eps) * (T + eps) * (T - eps) / e2 * B2;
    return g.derivs();
}

namespace {

std::vector<CubicJoin> fit_cubics(const GluePair& pair, double eps) {
    std::vector<CubicJoin> out;
    for (std::size_t b = 0; b < pair.left.size(); ++b) {
        const Derivs l = pair.left.block(b).coeff(-eps), r = pair.right.block(b).coeff(eps);
        out.push_back(CubicJoin::fit(l.v, l.d1, r.v, r.d1, eps));
    }
    return out;
}

}  // namespace

BlockMetricCurve cubic_glue(const GluePair& pair, double epsilon) {
    validate(pair);
    require_epsilon(pair, epsilon);
    const auto cubics = fit_cubics(pair, epsilon);
    std::vector<MetricBlock> blocks;
    const Interval dom{-epsilon, epsilon};
    for (std::size_t b = 0; b < cubics.size(); ++b)
        blocks.push_back({pair.left.block(b).fiber_dim, ScalarProfile([c = cubics[b]](double t) { return c(t); }, dom)});
    return BlockMetricCurve(std::move(blocks), dom);
}

std::array<double, 6> quintic_coefficients(double a0, double a1, double a2, double b0, double b1, double b2,
                                           double tau) {
    if (!(tau > 0.0)) throw Error(ErrorKind::InvalidInput, "tau must be positive");
    const double t2 = tau * tau, t3 = t2 * tau, t5 = t3 * t2;
    const double s2 = a2 + b2, d2 = a2 - b2, s1 = a1 + b1, d1 = a1 - b1, s0 = a0 + b0, d0 = a0 - b0;
    return {(t2 * s2 - 5 * tau * d1) / 16 + s0 / 2,
            (t2 * d2 - 7 * tau * s1 + 15 * d0) / (16 * tau),
            (-tau * s2 + 3 * d1) / (8 * tau),
            -(t2 * d2 - 5 * tau * s1 + 5 * d0) / (8 * t3),
            (tau * s2 - d1) / (16 * t3),
            (t2 * d2 - 3 * tau * s1 + 3 * d0) / (16 * t5)};
}

Derivs eval_polynomial(const std::array<double, 6>& c, double u) {
    const Jet U = Jet::variable(u);
    Jet acc;
    for (int k = 5; k >= 0; --k) acc = acc * U + Jet(c[k]);
    return acc.derivs();
}

namespace {

BlockMetricCurve build_join(const GluePair& pair, double eps, double tau) {
    const auto cubics = fit_cubics(pair, eps);
    const Interval dom{-pair.delta0, pair.delta0};
    std::vector<MetricBlock> blocks;
    for (std::size_t b = 0; b < cubics.size(); ++b) {
        const ScalarProfile h1 = pair.left.block(b).coeff, h2 = pair.right.block(b).coeff;
        const CubicJoin cub = cubics[b];
        std::array<Window, 2> win{};
        if (tau > 0.0) {
            win[0] = make_window(-eps, tau, cub(-eps + tau), h1(-eps - tau));
            win[1] = make_window(eps, tau, h2(eps + tau), cub(eps - tau));
        }
        auto fn = [h1, h2, cub, win, eps, tau](double t) -> Derivs {
            if (tau > 0.0) {
                for (const auto& w : win)
                    if (std::abs(t - w.center) < tau) return eval_polynomial(w.c, t - w.center);
            }
            if (t < -eps) return h1(t);
            if (t > eps) return h2(t);
            return cub(t);
        };
        blocks.push_back({pair.left.block(b).fiber_dim, ScalarProfile(fn, dom)});
    }
    return BlockMetricCurve(std::move(blocks), dom);
}

}  // namespace

BlockMetricCurve c1_join(const GluePair& pair, double epsilon) {
    validate(pair);
    require_epsilon(pair, epsilon);
    return build_join(pair, epsilon, 0.0);
}

BlockMetricCurve c2_join(const GluePair& pair, double epsilon, double tau) {
    validate(pair);
    require_epsilon(pair, epsilon);
    if (!(tau > 0.0)) throw Error(ErrorKind::InvalidInput, "tau must be positive");
    if (tau > epsilon / 10.0 * (1.0 + 1e-12)) throw Error(ErrorKind::TauTooLarge, "tau must not exceed epsilon/10");
    return build_join(pair, epsilon, tau);
}

std::vector<double> check_points(const Interval& domain, double epsilon, double tau, const GlueOptions& opts,
                                 int refine) {
    if (opts.grid_per_unit < 2) throw Error(ErrorKind::InvalidInput, "grid resolution must be at least 2");
    std::vector<double> ts;
    const int n = std::max(2, static_cast<int>(std::ceil(domain.length() * opts.grid_per_unit * refine)));
    for (int i = 1; i < n; ++i) ts.push_back(domain.lo + domain.length() * i / n);
    if (epsilon > 0.0) {
        const int m = std::max(opts.window_samples * refine,
                               static_cast<int>(std::ceil(2 * epsilon * opts.grid_per_unit * refine)));
        for (int i = 0; i <= m; ++i) ts.push_back(-epsilon + 2 * epsilon * i / m);
    }
    if (tau > 0.0) {
        const int m = opts.window_samples * refine;
        for (double c : {-epsilon, epsilon})
            for (int i = 0; i <= m; ++i) ts.push_back(c - tau + 2 * tau * i / m);
    }
    return ts;
}

RicciScan scan_min_ricci(const BlockMetricCurve& curve, const std::vector<double>& ts) {
    RicciScan best{std::numeric_limits<double>::infinity(), 0.0};
    for (double t : ts) {
        const double v = ricci_closed_form_block_curve(curve, t).min();
        if (v < best.value) best = {v, t};
    }
    return best;
}

double c1_distance(const BlockMetricCurve& a, const BlockMetricCurve& b, const std::vector<double>& ts) {
    double worst = 0.0;
    for (double t : ts)
        for (std::size_t i = 0; i < a.size(); ++i) {
            const Derivs x = a.block(i).coeff(t), y = b.block(i).coeff(t);
            worst = std::max({worst, std::abs(x.v - y.v), std::abs(x.d1 - y.d1)});
        }
    return worst;
}

namespace {

double point_min_ricci(const std::vector<int>& dims, const std::vector<Derivs>& w) {
    return block_ricci_from_coefficients(dims, w).min();
}

// sum over blocks and over (w, w', w'') of |d lambda_min / d entry| at one point
double point_sensitivity(const BlockMetricCurve& curve, double t) {
    std::vector<int> dims;
    std::vector<Derivs> w;
    for (const auto& b : curve.blocks()) {
        dims.push_back(b.fiber_dim);
        w.push_back(b.coeff(t));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        for (int d = 0; d < 3; ++d) {
            double* entry = d == 0 ? &w[i].v : d == 1 ? &w[i].d1 : &w[i].d2;
            const double orig = *entry;
            const double h = 1e-6 * std::max(1.0, std::abs(orig));
            *entry = orig + h;
            const double up = point_min_ricci(dims, w);
            *entry = orig - h;
            const double dn = point_min_ricci(dims, w);
            *entry = orig;
            total += std::abs(up - dn) / (2 * h);
        }
    return total;
}

}  // namespace

CurvatureReport positivity_certificate(const GlueResult& result, const GlueOptions& opts) {
    constexpr int kRefine = 4;
    const Interval dom = result.curve.domain();
    const auto ts = check_points(dom, result.params.epsilon, result.params.tau, opts, kRefine);
    const RicciScan scan = scan_min_ricci(result.curve, ts);

    const auto base = check_points(dom, 0.0, 0.0, opts, 1);
    double sens = 0.0;
    for (double t : base) sens = std::max(sens, point_sensitivity(result.curve, t));

    CurvatureReport r;
    r.kind = "glue";
    r.lambda_min_ricci = scan.value;
    r.lambda_min_ricci_at = scan.at;
    r.epsilon = result.params.epsilon;
    r.tau = result.params.tau;
    r.floor = result.params.ric_floor;
    r.smoothness = smoothness_name(result.smoothness);
    r.grids.push_back({"t_certificate", static_cast<int>(ts.size()), dom.lo, dom.hi});
    r.grids.push_back({"t_sensitivity", static_cast<int>(base.size()), dom.lo, dom.hi});
    if (result.pair.delta0 > 0.0) r.margins = perelman_margin(result.pair);
    r.sensitivity = sens;
    r.certified = scan.value > 0.0;
    r.perturbation_budget = r.certified && sens > 0.0 ? scan.value / sens : 0.0;
    r.scope = "C2 metric; any C2 perturbation of the block coefficients smaller than perturbation_budget keeps "
              "Ric > 0 at first order on the sampled grid";
    r.provenance.tool_version = kVersion;
    return r;
}

GlueResult unglued(const BlockMetricCurve& curve) {
    GlueResult out;
    out.curve = curve;
    out.smoothness = SmoothnessClass::C2;
    out.report = positivity_certificate(out);
    return out;
}

GlueResult glue_with_params(const GluePair& pair, const SmoothingParams& params, const GlueOptions& opts) {
    GlueResult out;
    out.pair = pair;
    out.params = params;
    if (params.tau > 0.0) {
        out.curve = c2_join(pair, params.epsilon, params.tau);
        out.smoothness = SmoothnessClass::C2;
    } else {
        out.curve = c1_join(pair, params.epsilon);
        out.smoothness = SmoothnessClass::C1;
    }
    out.report = positivity_certificate(out, opts);
    return out;
}

std::pair<double, GlueResult> epsilon_search(const GluePair& pair, double floor, const GlueOptions& opts) {
    const auto margins = perelman_margin(pair);
    for (std::size_t b = 0; b < margins.size(); ++b)
        if (!(margins[b] > kMarginTol))
            throw Error(ErrorKind::HypothesisViolated,
                        "normal-curvature margin of block " + std::to_string(b) + " is " + std::to_string(margins[b]));
    const Interval dom{-pair.delta0, pair.delta0};
    double eps = pair.delta0;
    for (int k = 0; k < opts.max_halvings; ++k) {
        eps /= 2;
        const BlockMetricCurve curve = c1_join(pair, eps);
        if (scan_min_ricci(curve, check_points(dom, eps, 0.0, opts)).value > floor)
            return {eps, glue_with_params(pair, {eps, 0.0, floor}, opts)};
    }
    throw Error(ErrorKind::SearchExhausted, "no epsilon in " + std::to_string(opts.max_halvings) + " halvings beats the floor");
}

GlueResult c2_smooth(const GlueResult& c1, double tau, const GlueOptions& opts) {
    if (tau > c1.params.epsilon / 10.0 * (1.0 + 1e-12)) throw Error(ErrorKind::TauTooLarge, "tau must not exceed epsilon/10");
    return glue_with_params(c1.pair, {c1.params.epsilon, tau, c1.params.ric_floor}, opts);
}

std::optional<GlueResult> try_tau(const GlueResult& c1, double c1_margin, double tau, double floor,
                                  const GlueOptions& opts) {
    const double eps = c1.params.epsilon;
    const BlockMetricCurve curve = c2_join(c1.pair, eps, tau);
    const Interval dom{-c1.pair.delta0, c1.pair.delta0};
    if (!(scan_min_ricci(curve, check_points(dom, eps, tau, opts)).value > floor)) return std::nullopt;
    std::vector<double> window;
    const int m = opts.window_samples;
    for (double c : {-eps, eps})
        for (int i = 0; i <= m; ++i) window.push_back(c - tau + 2 * tau * i / m);
    const BlockMetricCurve before = c1_join(c1.pair, eps);
    if (!(c1_distance(curve, before, window) < opts.c1_fraction * c1_margin)) return std::nullopt;
    return glue_with_params(c1.pair, {eps, tau, floor}, opts);
}

std::pair<double, GlueResult> tau_search(const GlueResult& c1, double floor, const GlueOptions& opts) {
    const double eps = c1.params.epsilon;
    const Interval dom{-c1.pair.delta0, c1.pair.delta0};
    const double margin = scan_min_ricci(c1_join(c1.pair, eps), check_points(dom, eps, 0.0, opts)).value;
    if (!(margin > floor))
        throw Error(ErrorKind::SearchExhausted, "floor is not below the C1 Ricci margin " + std::to_string(margin));
    double tau = eps / 10.0;
    for (int k = 0; k < opts.max_halvings; ++k, tau /= 2)
        if (auto r = try_tau(c1, margin, tau, floor, opts)) return {tau, std::move(*r)};
    throw Error(ErrorKind::SearchExhausted, "no tau in " + std::to_string(opts.max_halvings) + " halvings is accepted");
}

GlueResult perelman_glue(const GluePair& pair, double floor, const GlueOptions& opts) {
    auto [eps, c1] = epsilon_search(pair, floor, opts);
    auto [tau, c2] = tau_search(c1, floor, opts);
    return c2;
}

}  // namespace ricciglue
