#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ricciglue/block_metric.hpp"
#include "ricciglue/jet.hpp"

namespace ricciglue {

enum class DiffMode { analytic, finite_difference };

/// Axis-aligned coordinate box; queries must be strictly inside.
struct Box {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    bool contains_strictly(const Eigen::VectorXd& x) const;
    Eigen::VectorXd center() const { return 0.5 * (lo + hi); }
};

/// Metric components and their first and second partials at one point.
/// dg[k] = d_k g, ddg[k * dim + l] = d_k d_l g.
struct MetricJet {
    Eigen::MatrixXd g;
    std::vector<Eigen::MatrixXd> dg;
    std::vector<Eigen::MatrixXd> ddg;

    int dim() const { return static_cast<int>(g.rows()); }
    const Eigen::MatrixXd& second(int k, int l) const { return ddg[k * dim() + l]; }
};

/// Coordinate chart together with a metric field on it.
class ChartMetricField {
public:
    using EvalFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
    using JetFn = std::function<MetricJet(const Eigen::VectorXd&)>;

    ChartMetricField(int dim, Box box, EvalFn eval, JetFn jet = {}, double fd_step = 1e-3);

    int dim() const { return dim_; }
    const Box& box() const { return box_; }
    DiffMode mode() const { return mode_; }
    double fd_step() const { return fd_step_; }
    bool has_analytic_jet() const { return static_cast<bool>(jet_); }

    Eigen::MatrixXd metric(const Eigen::VectorXd& x) const { return eval_(x); }
    /// Partials from the supplied jet (analytic mode) or fourth-order central differences.
    MetricJet jet(const Eigen::VectorXd& x) const;

    ChartMetricField with_mode(DiffMode mode) const;
    ChartMetricField with_fd_step(double h) const;

private:
    int dim_;
    Box box_;
    EvalFn eval_;
    JetFn jet_;
    double fd_step_;
    DiffMode mode_;
};

/// Dense rank-3 array indexed (k, i, j).
class Tensor3 {
public:
    explicit Tensor3(int n = 0) : n_(n), data_(static_cast<std::size_t>(n) * n * n, 0.0) {}
    double& operator()(int k, int i, int j) { return data_[(k * n_ + i) * n_ + j]; }
    double operator()(int k, int i, int j) const { return data_[(k * n_ + i) * n_ + j]; }
    int dim() const { return n_; }

private:
    int n_;
    std::vector<double> data_;
};

/// Dense rank-4 array indexed (l, i, j, k).
class Tensor4 {
public:
    explicit Tensor4(int n = 0) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}
    double& operator()(int l, int i, int j, int k) { return data_[((l * n_ + i) * n_ + j) * n_ + k]; }
    double operator()(int l, int i, int j, int k) const { return data_[((l * n_ + i) * n_ + j) * n_ + k]; }
    int dim() const { return n_; }

private:
    int n_;
    std::vector<double> data_;
};

/// Gamma^k_ij as christoffel(k, i, j); R^l_ijk as riemann(l, i, j, k); Ric_jk = R^i_ijk.
struct CurvatureAtPoint {
    Eigen::VectorXd point;
    Eigen::MatrixXd metric;
    Tensor3 christoffel;
    Tensor4 riemann;
    Eigen::MatrixXd ricci;
};

/// Throws SingularMetric unless the smallest eigenvalue of g exceeds 1e-10.
void require_positive_definite(const Eigen::MatrixXd& g);

Tensor3 christoffel_from_jet(const MetricJet& jet);
CurvatureAtPoint curvature_from_jet(const MetricJet& jet, const Eigen::VectorXd& x);

Tensor3 christoffel_at(const ChartMetricField& field, const Eigen::VectorXd& x);
CurvatureAtPoint curvature_at(const ChartMetricField& field, const Eigen::VectorXd& x);
Eigen::MatrixXd ricci_at(const ChartMetricField& field, const Eigen::VectorXd& x);

/// max |R_mijk + R_mjki + R_mkij| with R_mijk = g_ml R^l_ijk
double bianchi_residual(const CurvatureAtPoint& c);

/// g(R(X,Y)Z, W)
double riemann_form(const CurvatureAtPoint& c, const Eigen::VectorXd& X, const Eigen::VectorXd& Y,
                    const Eigen::VectorXd& Z, const Eigen::VectorXd& W);

/// Eigenvalues of Ric relative to g, ascending.
Eigen::VectorXd ricci_eigenvalues(const Eigen::MatrixXd& ric, const Eigen::MatrixXd& g);
double min_ricci_eigenvalue(const Eigen::MatrixXd& ric, const Eigen::MatrixXd& g);

/// Unit normal and tangent basis of a hypersurface at a point. normal_field extends the
/// unit normal to a neighbourhood so that its covariant derivative can be taken.
struct HypersurfaceFrame {
    Eigen::VectorXd normal;
    std::vector<Eigen::VectorXd> tangent_basis;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> normal_field;
};

/// II(u_i, u_j) = g(nabla_{u_i} N, u_j) = -g(nabla_{u_i} u_j, N). Throws NonOrthogonalFrame when
/// the frame is not g-orthonormal to within 1e-8.
Eigen::MatrixXd second_fundamental_form(const ChartMetricField& field, const Eigen::VectorXd& x,
                                        const HypersurfaceFrame& frame);

/// Normal curvature 1/2 w'/w of a unit vector in one block of dt^2 + sum w_i ds^2.
double normal_curvature_profile(const BlockMetricCurve& curve, double t, std::size_t block);

/// One multiplicative factor f(x_coord) of a diagonal metric entry.
struct Factor {
    int coord;
    std::function<Derivs(double)> f;
};

/// Field with g_jj(x) = prod over factors[j] of f(x_coord), off-diagonals zero, analytic jet.
ChartMetricField make_separable_diagonal_field(int dim, Box box, std::vector<std::vector<Factor>> factors,
                                               double fd_step = 1e-3);

/// Polar-chart factors of the unit round k-sphere on coordinates first..first+k-1:
/// entry j carries sin^2 of each earlier sphere coordinate.
std::vector<std::vector<Factor>> sphere_chart_factors(int k, int first);

/// Chart box margin kept away from polar-chart singularities.
inline constexpr double kSphereBand = 0.05;

ChartMetricField round_sphere_field(int k, double radius = 1.0, double fd_step = 1e-3);
ChartMetricField euclidean_field(int dim, double fd_step = 1e-3);

}  // namespace ricciglue
