#include "ricciglue/profile_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ricciglue/errors.hpp"

namespace ricciglue {

namespace {

RotsymRicci rotsym_from(const Derivs& phi, int N) {
    if (!(phi.v > 0.0)) throw Error(ErrorKind::DegenerateProfile, "warp function not positive");
    RotsymRicci out;
    out.radial = -(N - 1) * phi.d2 / phi.v;
    out.spherical = -phi.d2 / phi.v + (N - 2) * (1.0 - phi.d1 * phi.d1) / (phi.v * phi.v);
    return out;
}

Factor profile_factor(int coord, const ScalarProfile& p, bool squared) {
    if (!squared) return {coord, [p](double x) { return p(x); }};
    return {coord, [p](double x) {
                const Jet a = Jet::from_derivs(p(x));
                return (a * a).derivs();
            }};
}

}  // namespace

RotsymRicci ricci_closed_form_rotsym(const ScalarProfile& phi, int N, double r) {
    if (N < 2) throw Error(ErrorKind::InvalidInput, "total dimension must be >= 2");
    return rotsym_from(phi(r), N);
}

ProductRicci ricci_closed_form_product(const DoublyWarpedMetric& metric, double s, double t) {
    constexpr double tol = 1e-12;
    const Derivs d = metric.delta(t), g = metric.gamma(s);
    if (std::abs(d.v - 1.0) > tol || std::abs(d.d1) > tol || std::abs(d.d2) > tol || std::abs(g.v - 1.0) > tol ||
        std::abs(g.d1) > tol || std::abs(g.d2) > tol)
        throw Error(ErrorKind::NotAProduct, "delta or gamma differ from 1 at the query point");
    const RotsymRicci a = rotsym_from(metric.alpha(s), metric.m);
    const RotsymRicci b = rotsym_from(metric.beta(t), metric.n);
    return {a.radial, a.spherical, b.radial, b.spherical};
}

double BlockRicci::min() const {
    double m = radial;
    for (double b : blocks) m = std::min(m, b);
    return m;
}

BlockRicci block_ricci_from_coefficients(const std::vector<int>& fiber_dims, const std::vector<Derivs>& w) {
    const std::size_t nb = w.size();
    std::vector<double> lp(nb), lpp(nb), p2(nb);  // phi'/phi, phi''/phi, phi'^2 with phi = sqrt(w)
    for (std::size_t i = 0; i < nb; ++i) {
        if (!(w[i].v > 0.0)) throw Error(ErrorKind::DegenerateBlock, "block coefficient not positive");
        lp[i] = 0.5 * w[i].d1 / w[i].v;
        lpp[i] = 0.5 * w[i].d2 / w[i].v - 0.25 * w[i].d1 * w[i].d1 / (w[i].v * w[i].v);
        p2[i] = 0.25 * w[i].d1 * w[i].d1 / w[i].v;
    }
    BlockRicci out;
    out.blocks.resize(nb);
    double mean_curv = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
        out.radial -= fiber_dims[i] * lpp[i];
        mean_curv += fiber_dims[i] * lp[i];
    }
    for (std::size_t i = 0; i < nb; ++i) {
        const int k = fiber_dims[i];
        out.blocks[i] = -lpp[i] + (k - 1) * (1.0 - p2[i]) / w[i].v - lp[i] * (mean_curv - k * lp[i]);
    }
    return out;
}

BlockRicci ricci_closed_form_block_curve(const BlockMetricCurve& curve, double t) {
    std::vector<int> dims;
    std::vector<Derivs> w;
    for (const auto& b : curve.blocks()) {
        dims.push_back(b.fiber_dim);
        w.push_back(b.coeff(t));
    }
    return block_ricci_from_coefficients(dims, w);
}

ChartMetricField as_chart_field(const DoublyWarpedMetric& metric, double fd_step) {
    const int a = metric.m - 1, b = metric.n - 1;
    const int dim = 2 + a + b;
    Box box{Eigen::VectorXd::Constant(dim, kSphereBand), Eigen::VectorXd::Constant(dim, std::numbers::pi - kSphereBand)};
    box.lo[0] = metric.s_range.lo;
    box.hi[0] = metric.s_range.hi;
    box.lo[1] = metric.t_range.lo;
    box.hi[1] = metric.t_range.hi;
    std::vector<std::vector<Factor>> f(dim);
    f[0] = {profile_factor(1, metric.delta, true)};
    f[1] = {profile_factor(0, metric.gamma, true)};
    auto sa = sphere_chart_factors(a, 2);
    for (int j = 0; j < a; ++j) {
        f[2 + j] = sa[j];
        f[2 + j].push_back(profile_factor(1, metric.delta, true));
        f[2 + j].push_back(profile_factor(0, metric.alpha, true));
    }
    auto sb = sphere_chart_factors(b, 2 + a);
    for (int j = 0; j < b; ++j) {
        f[2 + a + j] = sb[j];
        f[2 + a + j].push_back(profile_factor(0, metric.gamma, true));
        f[2 + a + j].push_back(profile_factor(1, metric.beta, true));
    }
    return make_separable_diagonal_field(dim, box, f, fd_step);
}

ChartMetricField as_chart_field(const BlockMetricCurve& curve, double fd_step) {
    const int dim = curve.total_dim();
    Box box{Eigen::VectorXd::Constant(dim, kSphereBand), Eigen::VectorXd::Constant(dim, std::numbers::pi - kSphereBand)};
    box.lo[0] = curve.domain().lo;
    box.hi[0] = curve.domain().hi;
    std::vector<std::vector<Factor>> f(dim);
    int next = 1;
    for (const auto& blk : curve.blocks()) {
        auto sf = sphere_chart_factors(blk.fiber_dim, next);
        for (int j = 0; j < blk.fiber_dim; ++j) {
            f[next + j] = sf[j];
            f[next + j].push_back(profile_factor(0, blk.coeff, false));
        }
        next += blk.fiber_dim;
    }
    return make_separable_diagonal_field(dim, box, f, fd_step);
}

Eigen::MatrixXd closed_form_ricci_matrix(const BlockMetricCurve& curve, const Eigen::VectorXd& x) {
    const ChartMetricField field = as_chart_field(curve);
    const Eigen::MatrixXd g = field.metric(x);
    const BlockRicci r = ricci_closed_form_block_curve(curve, x[0]);
    Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(g.rows(), g.cols());
    ric(0, 0) = r.radial;
    int next = 1;
    for (std::size_t b = 0; b < curve.size(); ++b)
        for (int j = 0; j < curve.block(b).fiber_dim; ++j, ++next) ric(next, next) = r.blocks[b] * g(next, next);
    return ric;
}

Eigen::MatrixXd closed_form_ricci_matrix(const DoublyWarpedMetric& metric, const Eigen::VectorXd& x) {
    const ChartMetricField field = as_chart_field(metric);
    const Eigen::MatrixXd g = field.metric(x);
    const ProductRicci r = ricci_closed_form_product(metric, x[0], x[1]);
    Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(g.rows(), g.cols());
    ric(0, 0) = r.s;
    ric(1, 1) = r.t;
    const int a = metric.m - 1;
    for (int j = 2; j < g.rows(); ++j) ric(j, j) = (j < 2 + a ? r.sphere_a : r.sphere_b) * g(j, j);
    return ric;
}

std::size_t LatticeGrid::size() const {
    std::size_t n = 1;
    for (int c : counts) n *= static_cast<std::size_t>(c);
    return n;
}

Eigen::VectorXd LatticeGrid::point(std::size_t index) const {
    Eigen::VectorXd x(lo.size());
    for (Eigen::Index d = lo.size() - 1; d >= 0; --d) {
        const int c = counts[d];
        const std::size_t i = index % c;
        index /= c;
        x[d] = c == 1 ? 0.5 * (lo[d] + hi[d]) : lo[d] + (hi[d] - lo[d]) * static_cast<double>(i) / (c - 1);
    }
    return x;
}

LatticeGrid interior_grid(const ChartMetricField& field, const std::vector<int>& coords, int count, double inset) {
    LatticeGrid grid{field.box().lo.array() + inset, field.box().hi.array() - inset,
                     std::vector<int>(field.dim(), 1)};
    for (int c : coords) grid.counts.at(c) = count;
    return grid;
}

GridMin min_ricci_on_grid(const ChartMetricField& field, const LatticeGrid& grid) {
    if (grid.lo.size() != field.dim() || static_cast<int>(grid.counts.size()) != field.dim())
        throw Error(ErrorKind::InvalidInput, "grid dimension does not match the field");
    for (int c : grid.counts)
        if (c < 1) throw Error(ErrorKind::InvalidInput, "grid counts must be positive");
    GridMin best{std::numeric_limits<double>::infinity(), Eigen::VectorXd()};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Eigen::VectorXd x = grid.point(i);
        const CurvatureAtPoint c = curvature_at(field, x);
        const double v = min_ricci_eigenvalue(c.ricci, c.metric);
        if (v < best.value) best = {v, x};
    }
    return best;
}

}  // namespace ricciglue
