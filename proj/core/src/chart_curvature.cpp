#include "ricciglue/chart_curvature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ricciglue/errors.hpp"

namespace ricciglue {

namespace {

constexpr double kPdThreshold = 1e-10;
constexpr double kFrameTol = 1e-8;

// offsets and weights of the fourth-order first-derivative stencil, divided by 12 h
constexpr int kOff[4] = {-2, -1, 1, 2};
constexpr double kW1[4] = {1.0, -8.0, 8.0, -1.0};

}  // namespace

bool Box::contains_strictly(const Eigen::VectorXd& x) const {
    if (x.size() != lo.size()) return false;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (!(x[i] > lo[i] && x[i] < hi[i])) return false;
    return true;
}

ChartMetricField::ChartMetricField(int dim, Box box, EvalFn eval, JetFn jet, double fd_step)
    : dim_(dim), box_(std::move(box)), eval_(std::move(eval)), jet_(std::move(jet)), fd_step_(fd_step),
      mode_(jet_ ? DiffMode::analytic : DiffMode::finite_difference) {
    if (dim_ < 1) throw Error(ErrorKind::InvalidInput, "chart dimension must be positive");
    if (box_.lo.size() != dim_ || box_.hi.size() != dim_) throw Error(ErrorKind::InvalidInput, "box dimension mismatch");
    if (!eval_) throw Error(ErrorKind::InvalidInput, "metric evaluator is empty");
    if (!(fd_step_ > 0.0)) throw Error(ErrorKind::InvalidInput, "finite-difference step must be positive");
}

ChartMetricField ChartMetricField::with_mode(DiffMode mode) const {
    if (mode == DiffMode::analytic && !jet_)
        throw Error(ErrorKind::InvalidInput, "analytic mode needs supplied metric partials");
    ChartMetricField out = *this;
    out.mode_ = mode;
    return out;
}

ChartMetricField ChartMetricField::with_fd_step(double h) const {
    if (!(h > 0.0)) throw Error(ErrorKind::InvalidInput, "finite-difference step must be positive");
    ChartMetricField out = *this;
    out.fd_step_ = h;
    return out;
}

MetricJet ChartMetricField::jet(const Eigen::VectorXd& x) const {
    if (mode_ == DiffMode::analytic) return jet_(x);
    const int n = dim_;
    const double h = fd_step_;
    MetricJet out;
    out.g = eval_(x);
    out.dg.assign(n, Eigen::MatrixXd::Zero(n, n));
    out.ddg.assign(static_cast<std::size_t>(n) * n, Eigen::MatrixXd::Zero(n, n));
    auto at = [&](int k, double dk, int l, double dl) {
        Eigen::VectorXd y = x;
        y[k] += dk;
        y[l] += dl;
        return eval_(y);
    };
    for (int k = 0; k < n; ++k) {
        Eigen::MatrixXd gm2 = at(k, -2 * h, k, 0), gm1 = at(k, -h, k, 0);
        Eigen::MatrixXd gp1 = at(k, h, k, 0), gp2 = at(k, 2 * h, k, 0);
        out.dg[k] = (gm2 - 8 * gm1 + 8 * gp1 - gp2) / (12 * h);
        out.ddg[k * n + k] = (-gm2 + 16 * gm1 - 30 * out.g + 16 * gp1 - gp2) / (12 * h * h);
    }
    for (int k = 0; k < n; ++k) {
        for (int l = k + 1; l < n; ++l) {
            Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) acc += kW1[a] * kW1[b] * at(k, kOff[a] * h, l, kOff[b] * h);
            acc /= 144 * h * h;
            out.ddg[k * n + l] = acc;
            out.ddg[l * n + k] = acc;
        }
    }
    return out;
}

void require_positive_definite(const Eigen::MatrixXd& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    if (!(lmin > kPdThreshold))
        throw Error(ErrorKind::SingularMetric, "metric not positive definite (min eigenvalue " + std::to_string(lmin) + ")");
}

namespace {

// Gamma_{l,ij} = 1/2 (d_j g_il + d_i g_jl - d_l g_ij)
double gamma_lower(const std::vector<Eigen::MatrixXd>& dg, int l, int i, int j) {
    return 0.5 * (dg[j](i, l) + dg[i](j, l) - dg[l](i, j));
}

double dgamma_lower(const MetricJet& J, int m, int l, int i, int j) {
    return 0.5 * (J.second(m, j)(i, l) + J.second(m, i)(j, l) - J.second(m, l)(i, j));
}

void check_jet(const MetricJet& jet) {
    const int n = jet.dim();
    if (static_cast<int>(jet.dg.size()) != n || static_cast<int>(jet.ddg.size()) != n * n)
        throw Error(ErrorKind::InvalidInput, "metric jet has inconsistent sizes");
}

}  // namespace

Tensor3 christoffel_from_jet(const MetricJet& jet) {
    check_jet(jet);
    require_positive_definite(jet.g);
    const int n = jet.dim();
    const Eigen::MatrixXd ginv = jet.g.inverse();
    Tensor3 G(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int l = 0; l < n; ++l) {
                const double gl = gamma_lower(jet.dg, l, i, j);
                if (gl == 0.0) continue;
                for (int k = 0; k < n; ++k) G(k, i, j) += ginv(k, l) * gl;
            }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j) G(k, i, j) = G(k, j, i);
    return G;
}

CurvatureAtPoint curvature_from_jet(const MetricJet& jet, const Eigen::VectorXd& x) {
    const int n = jet.dim();
    CurvatureAtPoint c;
    c.point = x;
    c.metric = jet.g;
    c.christoffel = christoffel_from_jet(jet);
    const Eigen::MatrixXd ginv = jet.g.inverse();
    const Tensor3& G = c.christoffel;

    // dG[m](k, i, j) = d_m Gamma^k_ij
    std::vector<Tensor3> dG(n, Tensor3(n));
    for (int m = 0; m < n; ++m) {
        const Eigen::MatrixXd dginv = -ginv * jet.dg[m] * ginv;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (int l = 0; l < n; ++l) {
                    const double gl = gamma_lower(jet.dg, l, i, j);
                    const double dgl = dgamma_lower(jet, m, l, i, j);
                    if (gl == 0.0 && dgl == 0.0) continue;
                    for (int k = 0; k < n; ++k) dG[m](k, i, j) += dginv(k, l) * gl + ginv(k, l) * dgl;
                }
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < i; ++j) dG[m](k, i, j) = dG[m](k, j, i);
    }

    c.riemann = Tensor4(n);
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                for (int k = 0; k < n; ++k) {
                    double r = dG[i](l, j, k) - dG[j](l, i, k);
                    for (int m = 0; m < n; ++m) r += G(m, j, k) * G(l, i, m) - G(m, i, k) * G(l, j, m);
                    c.riemann(l, i, j, k) = r;
                }
            }
    c.ricci = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) c.ricci(j, k) += c.riemann(i, i, j, k);
    return c;
}

namespace {

void require_inside(const ChartMetricField& field, const Eigen::VectorXd& x) {
    if (!field.box().contains_strictly(x)) throw Error(ErrorKind::DomainViolation, "point outside the chart box");
}

}  // namespace

Tensor3 christoffel_at(const ChartMetricField& field, const Eigen::VectorXd& x) {
    require_inside(field, x);
    require_positive_definite(field.metric(x));
    return christoffel_from_jet(field.jet(x));
}

CurvatureAtPoint curvature_at(const ChartMetricField& field, const Eigen::VectorXd& x) {
    require_inside(field, x);
    require_positive_definite(field.metric(x));
    return curvature_from_jet(field.jet(x), x);
}

Eigen::MatrixXd ricci_at(const ChartMetricField& field, const Eigen::VectorXd& x) {
    return curvature_at(field, x).ricci;
}

double bianchi_residual(const CurvatureAtPoint& c) {
    const int n = c.riemann.dim();
    auto lowered = [&](int m, int i, int j, int k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += c.metric(m, l) * c.riemann(l, i, j, k);
        return s;
    };
    double worst = 0.0;
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    worst = std::max(worst, std::abs(lowered(m, i, j, k) + lowered(m, j, k, i) + lowered(m, k, i, j)));
    return worst;
}

double riemann_form(const CurvatureAtPoint& c, const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                    const Eigen::VectorXd& Z, const Eigen::VectorXd& W) {
    const int n = c.riemann.dim();
    const Eigen::VectorXd gW = c.metric * W;
    double s = 0.0;
    for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) s += X[i] * Y[j] * Z[k] * gW[l] * c.riemann(l, i, j, k);
    return s;
}

Eigen::VectorXd ricci_eigenvalues(const Eigen::MatrixXd& ric, const Eigen::MatrixXd& g) {
    const Eigen::MatrixXd sym = 0.5 * (ric + ric.transpose());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, g, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double min_ricci_eigenvalue(const Eigen::MatrixXd& ric, const Eigen::MatrixXd& g) {
    return ricci_eigenvalues(ric, g).minCoeff();
}

Eigen::MatrixXd second_fundamental_form(const ChartMetricField& field, const Eigen::VectorXd& x,
                                        const HypersurfaceFrame& frame) {
    require_inside(field, x);
    const int n = field.dim();
    const Eigen::MatrixXd g = field.metric(x);
    require_positive_definite(g);
    const Eigen::VectorXd& N = frame.normal;
    if (N.size() != n) throw Error(ErrorKind::InvalidInput, "normal has wrong dimension");
    if (std::abs(N.dot(g * N) - 1.0) > kFrameTol)
        throw Error(ErrorKind::NonOrthogonalFrame, "normal is not of unit length");
    for (const auto& u : frame.tangent_basis) {
        if (u.size() != n) throw Error(ErrorKind::InvalidInput, "tangent vector has wrong dimension");
        if (std::abs(u.dot(g * N)) > kFrameTol * std::max(1.0, std::sqrt(u.dot(g * u))))
            throw Error(ErrorKind::NonOrthogonalFrame, "tangent vector not orthogonal to the normal");
    }
    if (!frame.normal_field) throw Error(ErrorKind::InvalidInput, "frame needs a normal field extension");

    const Tensor3 G = christoffel_from_jet(field.jet(x));
    const double h = field.fd_step();
    // DN(:, i) = d_i N + Gamma^k_ij N^j
    Eigen::MatrixXd DN(n, n);
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
        for (int a = 0; a < 4; ++a) {
            Eigen::VectorXd y = x;
            y[i] += kOff[a] * h;
            acc += kW1[a] * frame.normal_field(y);
        }
        Eigen::VectorXd col = acc / (12 * h);
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j) col[k] += G(k, i, j) * N[j];
        DN.col(i) = col;
    }
    const std::size_t m = frame.tangent_basis.size();
    Eigen::MatrixXd II(m, m);
    for (std::size_t a = 0; a < m; ++a) {
        const Eigen::VectorXd nabla = DN * frame.tangent_basis[a];
        for (std::size_t b = 0; b < m; ++b) II(a, b) = nabla.dot(g * frame.tangent_basis[b]);
    }
    return II;
}

double normal_curvature_profile(const BlockMetricCurve& curve, double t, std::size_t block) {
    if (block >= curve.size()) throw Error(ErrorKind::InvalidInput, "no such block");
    const Derivs w = curve.block(block).coeff(t);
    if (!(w.v > 0.0)) throw Error(ErrorKind::DegenerateBlock, "block coefficient not positive");
    return 0.5 * w.d1 / w.v;
}

ChartMetricField make_separable_diagonal_field(int dim, Box box, std::vector<std::vector<Factor>> factors,
                                               double fd_step) {
    if (static_cast<int>(factors.size()) != dim) throw Error(ErrorKind::InvalidInput, "one factor list per diagonal entry");
    auto eval = [dim, factors](const Eigen::VectorXd& x) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
        for (int j = 0; j < dim; ++j) {
            double p = 1.0;
            for (const auto& f : factors[j]) p *= f.f(x[f.coord]).v;
            g(j, j) = p;
        }
        return g;
    };
    auto jet = [dim, factors](const Eigen::VectorXd& x) {
        MetricJet out;
        out.g = Eigen::MatrixXd::Zero(dim, dim);
        out.dg.assign(dim, Eigen::MatrixXd::Zero(dim, dim));
        out.ddg.assign(static_cast<std::size_t>(dim) * dim, Eigen::MatrixXd::Zero(dim, dim));
        for (int j = 0; j < dim; ++j) {
            // collapse factors sharing a coordinate, then apply the product rule across coordinates
            std::vector<int> coords;
            std::vector<Jet> vals;
            for (const auto& f : factors[j]) {
                const Jet v = Jet::from_derivs(f.f(x[f.coord]));
                auto it = std::find(coords.begin(), coords.end(), f.coord);
                if (it == coords.end()) {
                    coords.push_back(f.coord);
                    vals.push_back(v);
                } else {
                    vals[it - coords.begin()] *= v;
                }
            }
            double total = 1.0;
            for (const auto& v : vals) total *= v.c0;
            out.g(j, j) = total;
            const std::size_t nc = coords.size();
            auto others = [&](std::size_t a, std::size_t b) {
                double p = 1.0;
                for (std::size_t c = 0; c < nc; ++c)
                    if (c != a && c != b) p *= vals[c].c0;
                return p;
            };
            for (std::size_t a = 0; a < nc; ++a) {
                const int ka = coords[a];
                const Derivs da = vals[a].derivs();
                out.dg[ka](j, j) = da.d1 * others(a, a);
                out.ddg[ka * dim + ka](j, j) = da.d2 * others(a, a);
                for (std::size_t b = a + 1; b < nc; ++b) {
                    const int kb = coords[b];
                    const double v = da.d1 * vals[b].c1 * others(a, b);
                    out.ddg[ka * dim + kb](j, j) = v;
                    out.ddg[kb * dim + ka](j, j) = v;
                }
            }
        }
        return out;
    };
    return ChartMetricField(dim, std::move(box), eval, jet, fd_step);
}

std::vector<std::vector<Factor>> sphere_chart_factors(int k, int first) {
    std::vector<std::vector<Factor>> out(k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < j; ++i)
            out[j].push_back({first + i, [](double th) {
                                  const Jet s = sin(Jet::variable(th));
                                  return (s * s).derivs();
                              }});
    return out;
}

ChartMetricField round_sphere_field(int k, double radius, double fd_step) {
    Box box{Eigen::VectorXd::Constant(k, kSphereBand), Eigen::VectorXd::Constant(k, std::numbers::pi - kSphereBand)};
    auto factors = sphere_chart_factors(k, 0);
    const double r2 = radius * radius;
    for (auto& f : factors) f.push_back({0, [r2](double) { return Derivs{r2, 0, 0, 0}; }});
    return make_separable_diagonal_field(k, box, factors, fd_step);
}

ChartMetricField euclidean_field(int dim, double fd_step) {
    Box box{Eigen::VectorXd::Constant(dim, -1.0), Eigen::VectorXd::Constant(dim, 1.0)};
    return make_separable_diagonal_field(dim, box, std::vector<std::vector<Factor>>(dim), fd_step);
}

}  // namespace ricciglue
